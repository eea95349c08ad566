"""Euler data: the hypergeometric construction, the gluing and
reciprocity identities, the monoid operations, linking, degree bounds,
the Lagrange map, and the mirror-group action on restriction sequences."""

from fractions import Fraction

import pytest

from mirrorcalc.algebra import RationalFunction, bar_involution, rf_equal
from mirrorcalc.bundles import OmegaClass, SplittingType, omega_class
from mirrorcalc.eulerdata import (EulerDataError, EulerDataTable,
                                  build_hypergeom_data, check_degree_bound,
                                  check_gluing, check_linked, check_reciprocity,
                                  combine, endpoint_weights_data, lagrange_map,
                                  mirror_transform, restrict, to_table)
from mirrorcalc.pipeline import build_hypergeom_series, compute_normalization

MULTICOVER = SplittingType(1, (), (1, 1))
LOCAL_P2 = SplittingType(2, (), (3,))
LINE_P1 = SplittingType(1, (1,), ())  # O(1) on P^1, the simplest convex data


def tables_equal(a, b):
    if set(a.entries) != set(b.entries):
        return False
    return (all(rf_equal(a.entries[k], b.entries[k]) for k in a.entries)
            and all(rf_equal(a.omega_restrictions[i], b.omega_restrictions[i])
                    for i in a.omega_restrictions))


# ---------------------------------------------------------------------
# construction


def test_hypergeom_rule_multicover():
    # d = 2 gives (kappa - alpha)^2
    data = build_hypergeom_data(MULTICOVER)
    ring = data.ring
    kappa, alpha = ring.var("kappa"), ring.var("alpha")
    assert data.polynomial(2) == (kappa - alpha) ** 2


def test_hypergeom_rule_local_p2():
    data = build_hypergeom_data(LOCAL_P2)
    ring = data.ring
    kappa, alpha = ring.var("kappa"), ring.var("alpha")
    assert data.polynomial(1) == (-3 * kappa + alpha) * (-3 * kappa + 2 * alpha)


def test_hypergeom_rule_convex():
    data = build_hypergeom_data(LINE_P1)
    ring = data.ring
    kappa, alpha = ring.var("kappa"), ring.var("alpha")
    assert data.polynomial(1) == kappa * (kappa - alpha)


def test_hypergeom_trivial_bundle():
    data = build_hypergeom_data(SplittingType(1, (), ()))
    assert data.polynomial(3) == data.ring.one


def test_hypergeom_total_degree():
    # deg P_d = sum_a (l_a d + 1) + sum_b (k_b d - 1), with or without x
    for st in (SplittingType(4, (2, 2), (1,)), LOCAL_P2, MULTICOVER):
        for with_x in (False, True):
            data = build_hypergeom_data(st, with_x=with_x)
            for d in (1, 2):
                expected = (sum(l * d + 1 for l in st.convex)
                            + sum(k * d - 1 for k in st.concave))
                assert data.polynomial(d).total_degree() == expected


def test_omega_class_values():
    assert omega_class(SplittingType(4, (5,), ())) == OmegaClass(Fraction(5), 1)
    assert omega_class(LOCAL_P2) == OmegaClass(Fraction(-1, 3), -1)
    assert omega_class(SplittingType(3, (2,), (2,))) == OmegaClass(Fraction(-1), 0)
    assert omega_class(SplittingType(1, (), ())) == OmegaClass(Fraction(1), 0)


def test_restrict_values():
    local = build_hypergeom_data(LOCAL_P2)
    ring = local.ring
    lam0, alpha = ring.var("lam0"), ring.var("alpha")
    assert restrict(local, 1, 0, 0) == RationalFunction(
        (-3 * lam0 + alpha) * (-3 * lam0 + 2 * alpha))

    multi = build_hypergeom_data(MULTICOVER)
    # P_2 at kappa = lam0 + alpha collapses to lam0^2 by hand
    lam0m = multi.ring.var("lam0")
    assert restrict(multi, 2, 0, 1) == RationalFunction(lam0m * lam0m)

    endpoint = endpoint_weights_data(2)
    ring = endpoint.ring
    for d in (1, 2, 3):
        for i in (0, 1):
            lam = ring.var(f"lam{i}")
            expected = (lam + d * ring.var("alpha")) * lam
            assert restrict(endpoint, d, i, d) == RationalFunction(expected)


def test_restrict_rejects_bad_indices():
    data = build_hypergeom_data(MULTICOVER)
    with pytest.raises(EulerDataError):
        restrict(data, 1, 0, 2)
    with pytest.raises(EulerDataError):
        restrict(data, 0, 0, 0)
    with pytest.raises(EulerDataError):
        restrict(data, 1, 5, 0)


def test_to_table_multicover_d1():
    tbl = to_table(build_hypergeom_data(MULTICOVER), 1)
    one = RationalFunction(tbl.ring.one)
    for i in (0, 1):
        for r in (0, 1):
            assert tbl.entry(1, i, r) == one
        lam = tbl.ring.var(f"lam{i}")
        assert rf_equal(tbl.omega_restrictions[i],
                        RationalFunction(tbl.ring.one, lam * lam))


def test_to_table_trivial_bundle():
    tbl = to_table(build_hypergeom_data(SplittingType(1, (), ())), 2)
    one = RationalFunction(tbl.ring.one)
    assert all(v == one for v in tbl.entries.values())
    assert all(v == one for v in tbl.omega_restrictions.values())


# ---------------------------------------------------------------------
# gluing and reciprocity


def test_gluing_local_p2():
    report = check_gluing(to_table(build_hypergeom_data(LOCAL_P2), 3))
    assert report.all_pass and not report.inconclusive


def test_gluing_endpoint_data():
    report = check_gluing(to_table(endpoint_weights_data(2), 3))
    assert report.all_pass


def test_gluing_detects_corruption():
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 2)
    ring = tbl.ring
    entries = dict(tbl.entries)
    poison = RationalFunction(ring.one + ring.var("alpha"))
    entries[(2, 1, 1)] = entries[(2, 1, 1)] * poison
    corrupted = EulerDataTable(tbl.n, tbl.d_max, ring, entries, tbl.omega_restrictions)
    report = check_gluing(corrupted)
    assert not report.all_pass
    assert [(r.d, r.i, r.r) for r in report.failures] == [(2, 1, 1)]


def test_reciprocity_line_data_by_hand():
    # P_1(lam0 + alpha) = (lam0+alpha)*lam0 equals bar(P_1(lam0)) = lam0*(lam0+alpha)
    tbl = to_table(build_hypergeom_data(LINE_P1), 1)
    ring = tbl.ring
    lam0, alpha = ring.var("lam0"), ring.var("alpha")
    assert tbl.entry(1, 0, 1) == RationalFunction((lam0 + alpha) * lam0)
    assert rf_equal(tbl.entry(1, 0, 1), bar_involution(tbl.entry(1, 0, 0), 0))
    report = check_reciprocity(tbl)
    assert report.all_pass and not report.inconclusive


def test_reciprocity_multicover():
    report = check_reciprocity(to_table(build_hypergeom_data(MULTICOVER), 4))
    assert report.all_pass and not report.inconclusive


def test_reciprocity_detects_sign_flip():
    tbl = to_table(build_hypergeom_data(MULTICOVER), 2)
    ring = tbl.ring
    entries = dict(tbl.entries)
    # flip an alpha sign in the top restriction: item (i) must fail at d=2
    entries[(2, 0, 2)] = bar_involution(entries[(2, 0, 2)], 0)
    corrupted = EulerDataTable(tbl.n, tbl.d_max, ring, entries, tbl.omega_restrictions)
    report = check_reciprocity(corrupted)
    failed = {(r.d, r.i) for r in report.failures if "item (i)" in r.witness}
    assert (2, 0) in failed


def test_gluing_with_x_extension():
    report = check_gluing(to_table(build_hypergeom_data(LOCAL_P2, with_x=True), 2))
    assert report.all_pass
    report = check_gluing(to_table(build_hypergeom_data(LINE_P1, with_x=True), 2))
    assert report.all_pass


# ---------------------------------------------------------------------
# monoid operations


def test_combine_scale_identity():
    tbl = to_table(build_hypergeom_data(MULTICOVER), 2)
    assert tables_equal(combine("scale", tbl, Fraction(1)), tbl)


def test_combine_alternate_twice():
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 2)
    assert tables_equal(combine("alternate", combine("alternate", tbl)), tbl)


def test_combine_scale_and_alternate_stay_euler():
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 2)
    assert check_gluing(combine("scale", tbl, Fraction(7, 3))).all_pass
    assert check_gluing(combine("alternate", tbl)).all_pass


def test_example8_square_reproduces_multicover():
    # the quotient of the O(1) data by kappa(kappa - d alpha) squares to
    # the multiple-cover data
    line = to_table(build_hypergeom_data(LINE_P1), 3)
    endpoint = to_table(endpoint_weights_data(1), 3)
    ratio = combine("quotient", line, endpoint)
    squared = combine("product", ratio, ratio)
    assert tables_equal(squared, to_table(build_hypergeom_data(MULTICOVER), 3))
    assert check_gluing(ratio).all_pass


def test_product_of_euler_data_is_euler():
    for n in (1, 2):
        a = to_table(build_hypergeom_data(SplittingType(n, (1,), ())), 3)
        b = to_table(endpoint_weights_data(n), 3)
        assert check_gluing(a).all_pass and check_gluing(b).all_pass
        assert check_gluing(combine("product", a, b)).all_pass


def test_quotient_by_zero_entry_names_indices():
    line = to_table(build_hypergeom_data(LINE_P1), 2)
    seq0 = line.restriction_sequence()
    values = {key: (val if key[0] == 0 else RationalFunction(seq0.ring.zero))
              for key, val in seq0.values.items()}
    zero_table = lagrange_map(type(seq0)(seq0.n, seq0.d_max, seq0.ring, values))
    with pytest.raises(EulerDataError) as exc:
        combine("quotient", line, zero_table)
    assert "(1, 0, 0)" in str(exc.value)


# ---------------------------------------------------------------------
# linking and degree bounds


def test_linked_self():
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 3)
    assert check_linked(tbl, tbl).all_pass


def test_linked_mirror_transform():
    # the canonical shift produces a linked partner (preservation of
    # linked values under the mirror-group action)
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 3)
    series = build_hypergeom_series(LOCAL_P2, 3)
    _, shift = compute_normalization(series, LOCAL_P2)
    transformed = mirror_transform(tbl.restriction_sequence(), None, shift)
    assert check_linked(tbl, lagrange_map(transformed)).all_pass


def test_linked_detects_shift():
    tbl = to_table(build_hypergeom_data(LOCAL_P2), 2)
    entries = dict(tbl.entries)
    entries[(1, 0, 0)] = entries[(1, 0, 0)] + RationalFunction(tbl.ring.one)
    shifted = EulerDataTable(tbl.n, tbl.d_max, tbl.ring, entries, tbl.omega_restrictions)
    report = check_linked(tbl, shifted)
    assert not report.all_pass
    assert all(r.d == 1 and r.i == 0 for r in report.failures)


def test_linked_reports_inconclusive_on_vanishing_denominator():
    tbl = to_table(build_hypergeom_data(MULTICOVER), 1)
    ring = tbl.ring
    entries = dict(tbl.entries)
    # a denominator that dies exactly at alpha = (lam0 - lam1)/1
    pole = RationalFunction(ring.one, ring.var("lam0") - ring.var("lam1") - ring.var("alpha"))
    entries[(1, 0, 0)] = entries[(1, 0, 0)] + pole
    degenerate = EulerDataTable(tbl.n, tbl.d_max, ring, entries, tbl.omega_restrictions)
    report = check_linked(degenerate, tbl)
    statuses = {(r.d, r.i, r.r): r.status for r in report.results}
    assert statuses[(1, 0, 1)] == "inconclusive"


def test_degree_bound_self_and_zero():
    tbl = to_table(build_hypergeom_data(MULTICOVER), 3)
    self_report = check_degree_bound(tbl, tbl)
    assert self_report.all_pass
    assert all("-inf" in r.witness for r in self_report.results)
    # against zero: deg = 2d - 2 meets the bound exactly
    zero_report = check_degree_bound(tbl)
    assert zero_report.all_pass
    assert {r.witness for r in zero_report.results if r.d == 3} == {"deg=4 bound=4"}


def test_degree_bound_local_p2_fails():
    report = check_degree_bound(to_table(build_hypergeom_data(LOCAL_P2), 3))
    assert not report.all_pass
    for r in report.results:
        assert r.status == "fail" and f"deg={3 * r.d - 1}" in r.witness


# ---------------------------------------------------------------------
# the Lagrange map


def test_lagrange_of_zero_sequence():
    seq0 = to_table(build_hypergeom_data(LINE_P1), 2).restriction_sequence()
    values = {key: (val if key[0] == 0 else RationalFunction(seq0.ring.zero))
              for key, val in seq0.values.items()}
    seq = type(seq0)(seq0.n, seq0.d_max, seq0.ring, values)
    tbl = lagrange_map(seq)
    assert all(v.is_zero() for v in tbl.entries.values())


def test_lagrange_inverts_restriction():
    # L(I(Q)) = Q on Euler data, and I(L(B)) = B on sequences
    for data in (build_hypergeom_data(LINE_P1), build_hypergeom_data(LOCAL_P2),
                 endpoint_weights_data(2)):
        tbl = to_table(data, 3)
        rebuilt = lagrange_map(tbl.restriction_sequence())
        assert tables_equal(rebuilt, tbl)
        seq = tbl.restriction_sequence()
        roundtrip = lagrange_map(seq).restriction_sequence()
        assert all(rf_equal(roundtrip.values[key], seq.values[key])
                   for key in seq.values)


def test_lagrange_constant_sequence():
    # B_0 = B_1 = Omega: entry (1,i,0) = Omega(lam_i), entry (1,i,1) = bar
    seq0 = to_table(build_hypergeom_data(LOCAL_P2), 1).restriction_sequence()
    values = {(0, i): seq0.values[(0, i)] for i in range(3)}
    values.update({(1, i): seq0.values[(0, i)] for i in range(3)})
    seq = type(seq0)(seq0.n, 1, seq0.ring, values)
    tbl = lagrange_map(seq)
    for i in range(3):
        omega_i = seq0.values[(0, i)]
        assert rf_equal(tbl.entry(1, i, 0), omega_i)
        assert rf_equal(tbl.entry(1, i, 1), bar_involution(omega_i, 0))


# ---------------------------------------------------------------------
# the mirror-group action


def test_mirror_transform_trivial():
    seq = to_table(build_hypergeom_data(LOCAL_P2), 2).restriction_sequence()
    out = mirror_transform(seq, None, None)
    assert all(rf_equal(out.values[key], seq.values[key]) for key in seq.values)


def test_mirror_transform_first_order_shift():
    # g = c q at d = 1: the new value is B_1 - (lam_i c / alpha) * Omega_i
    # * prod_j (lam_i - lam_j - alpha)
    c = Fraction(3, 2)
    seq = to_table(build_hypergeom_data(LOCAL_P2), 2).restriction_sequence()
    out = mirror_transform(seq, None, [0, c])
    ring = seq.ring
    alpha = ring.var("alpha")
    for i in range(3):
        lam_i = ring.var(f"lam{i}")
        prod = ring.one
        for j in range(3):
            prod = prod * (lam_i - ring.var(f"lam{j}") - alpha)
        correction = (RationalFunction(lam_i * c, alpha) * seq.values[(0, i)]
                      * RationalFunction(prod))
        assert rf_equal(out.values[(1, i)], seq.values[(1, i)] - correction)


def test_mirror_transform_preserves_linked_values():
    # the correction vanishes at alpha = (lam_i - lam_j)/d for every j != i
    seq = to_table(build_hypergeom_data(LOCAL_P2), 2).restriction_sequence()
    out = mirror_transform(seq, None, [0, Fraction(5)])
    ring = seq.ring
    for d in (1, 2):
        for i in range(3):
            diff = out.values[(d, i)] - seq.values[(d, i)]
            for j in range(3):
                if j == i:
                    continue
                binding = (ring.var(f"lam{i}") - ring.var(f"lam{j}")) * Fraction(1, d)
                assert diff.substitute({"alpha": binding}).is_zero()


def test_mirror_transform_inverse_composition():
    from mirrorcalc.qseries import ScalarQSeries, qseries_reversion

    d_max = 2
    seq = to_table(build_hypergeom_data(LOCAL_P2), d_max).restriction_sequence()
    g = ScalarQSeries(d_max, (0, Fraction(2), Fraction(-1, 2)))
    forward = ScalarQSeries.q(d_max) * g.exp()
    g_inverse = -g.compose(qseries_reversion(forward))
    out = mirror_transform(mirror_transform(seq, None, g), None, g_inverse)
    assert all(rf_equal(out.values[key], seq.values[key]) for key in seq.values)


def test_mirror_transform_multiplier():
    # a pure multiplier e^(f/alpha) with f = c q changes B_1 by
    # (c/alpha) * Omega_i * prod_j(lam_i - lam_j - alpha)
    seq = to_table(build_hypergeom_data(LOCAL_P2), 1).restriction_sequence()
    ring = seq.ring
    c = ring.const(Fraction(4))
    out = mirror_transform(seq, [ring.zero, c], None)
    alpha = ring.var("alpha")
    for i in range(3):
        lam_i = ring.var(f"lam{i}")
        prod = ring.one
        for j in range(3):
            prod = prod * (lam_i - ring.var(f"lam{j}") - alpha)
        correction = (RationalFunction(c, alpha) * seq.values[(0, i)]
                      * RationalFunction(prod))
        assert rf_equal(out.values[(1, i)], seq.values[(1, i)] + correction)

"""Тесты калькулятора оценок."""

import math
from fractions import Fraction

import pytest

from percolation import bounds
from percolation.bounds import AdmissibleIndex
from percolation.errors import InputDomainError
from percolation.numbers import MP, LogNumber, log_count

GRID = [(n, k) for n in (64, 100, 400) for k in (2, 3, 16)]


def approx(value, rel=1e-12):
    return pytest.approx(value, rel=rel)


def test_parameters_examples():
    p = bounds.parameters(16, 2)
    assert (p.D, p.L, p.i_star) == (6, 8, 3)
    assert float(p.p_star) == approx(2.0 ** -15)
    assert float(p.p_upper_star) == approx(200 * 2.0 ** -15)

    p = bounds.parameters(4, 2)
    assert (p.D, p.L, p.i_star) == (2, 2, 1)

    p = bounds.parameters(100, 2)
    assert (p.D, p.L) == (18, 50)
    assert float(p.p_star) == approx(1e-4 * 2.0 ** -19)

    with pytest.raises(InputDomainError):
        bounds.parameters(0, 2)
    with pytest.raises(InputDomainError):
        bounds.parameters(4, 1)


def test_c_const():
    assert float(bounds.c_const(0, 100, 2)) == 1.0
    assert float(bounds.c_const(1, 100, 2)) == approx(9 * math.sqrt(2) / 20)
    c14 = float(bounds.c_const(14, 100, 2))
    assert float(bounds.c_const(15, 100, 2)) == approx(c14 * 1.25 * 1.04)
    with pytest.raises(InputDomainError):
        bounds.c_const(-1, 100, 2)


@pytest.mark.parametrize("k", [2, 3, 16])
def test_phi_small_m(k):
    p = 1e-3
    assert float(bounds.phi(0, 50, k, p)) == approx(p)
    assert float(bounds.phi(1, 50, k, p)) == approx(0.45 * (k - 1) * k ** 0.75 * p ** 1.5)
    assert float(bounds.phi(2, 50, k, p)) == approx(0.81 * (k - 1) ** 2 * k ** 2 * p ** 2)


def test_phi_rejects_closed_endpoints():
    for p in (0, 1, 1.5):
        with pytest.raises(InputDomainError):
            bounds.phi(1, 10, 2, p)


def test_admissible_indices_examples():
    assert bounds.admissible_indices(2, 2) == [(2, 0, 0, 2), (2, 1, 0, 1), (2, 1, 1, 0), (2, 1, 1, 1)]
    assert bounds.admissible_indices(1, 1) == [(1, 0, 0, 1)]
    with pytest.raises(InputDomainError):
        bounds.admissible_indices(2, 3)


def test_dominant_index_is_admissible():
    # i + d = ℓ у главного слагаемого
    for D in range(2, 20):
        assert bounds.is_admissible(AdmissibleIndex(D, D - 2, 0, 2), D, D)


def test_count_quadruples_examples():
    assert bounds.count_quadruples(2, 2, 2, (2, 0, 0, 2)) == 2
    assert bounds.count_quadruples(2, 2, 2, (2, 1, 1, 0)) == 4
    assert bounds.count_quadruples(2, 2, 2, (2, 1, 0, 1)) == 8
    assert bounds.count_quadruples(2, 2, 2, (2, 1, 0, 2)) == 0
    assert bounds.count_quadruples(1, 2, 1, (1, 0, 0, 1)) == 1
    with pytest.raises(InputDomainError):
        bounds.count_quadruples(2, 2, 2, (2, -1, 0, 2))


@pytest.mark.parametrize("m,k", [(6, 2), (20, 3), (24, 16)])
def test_count_quadruples_dual_path(m, k):
    for t in (1, m // 2, m):
        for idx in bounds.admissible_indices(m, t):
            exact = log_count(bounds.count_quadruples(m, k, t, idx))
            logged = bounds.count_quadruples_log(m, k, t, idx)
            assert abs(logged.ln - exact.ln) <= MP.mpf("1e-10") * max(1, abs(exact.ln))


def test_f_value_examples():
    assert bounds.f_value(2, 2, 0.5, 2, (2, 1, 0, 2)).is_zero
    assert float(bounds.f_value(2, 2, 0.5, 2, (2, 0, 0, 2))) == approx(0.5)
    phi1 = 0.45 * 2 ** 0.75 * 2 ** -1.5
    assert float(bounds.f_value(2, 2, 0.5, 2, (2, 1, 1, 0))) == approx(4 * phi1 ** 2)


def test_sequence_counts():
    assert bounds.seq_extension_count(4, 2, 1) == 6
    assert bounds.seq_extension_count(4, 2, 2) == 4
    assert bounds.seq_extension_count(2, 3, 1) == 4
    assert bounds.seq_count(2, 2, 0) == 4
    assert bounds.seq_count(2, 2, 1) == 4
    assert bounds.seq_count(4, 2, 2) == 384
    with pytest.raises(InputDomainError):
        bounds.seq_extension_count(4, 2, 0)
    with pytest.raises(InputDomainError):
        bounds.seq_count(4, 2, 3)


def test_seq_count_is_product_of_extensions():
    for n, k in ((12, 2), (9, 3), (7, 5)):
        product = k ** n
        for ell in range(1, n // 2 + 1):
            product *= bounds.seq_extension_count(n, k, ell)
            assert bounds.seq_count(n, k, ell) == product


@pytest.mark.parametrize("n,k", [(12, 2), (9, 3), (7, 5), (40, 16), (200, 2)])
def test_seq_count_log_matches_exact(n, k):
    for ell in range(n // 2 + 1):
        exact = log_count(bounds.seq_count(n, k, ell))
        logged = bounds.seq_count_log(n, k, ell)
        assert abs(logged.ln - exact.ln) <= MP.mpf("1e-12") * max(1, abs(exact.ln))
    with pytest.raises(InputDomainError):
        bounds.seq_count_log(n, k, n // 2 + 1)


def test_expected_sequences():
    assert bounds.expected_sequences(2, 2, 1, 0).is_zero
    assert float(bounds.expected_sequences(2, 2, 1, Fraction(1, 2))) == approx(1.0)
    p_upper = bounds.parameters(16, 2).p_upper_star
    assert not bounds.expected_sequences(16, 2, 8, p_upper).is_zero


def test_dhat():
    assert bounds.dhat(1, 20, 2) == 190
    assert bounds.dhat(2, 4, 2) == 18
    for j in range(1, 10):
        assert bounds.dhat(j + 1, 20, 3) >= 3 * bounds.dhat(j, 20, 3)
        assert bounds.dhat(j, 20, 3) >= bounds.seq_extension_count(20, 3, j)
    with pytest.raises(InputDomainError):
        bounds.dhat(3, 4, 2)


def test_psi_examples():
    assert bounds.psi_exact(0, 1, 1, 4, 2) == Fraction(1, 6)
    for m in range(4):
        for i in range(m + 2):
            assert bounds.psi_exact(m, i, 0, 30, 2) == 1
    for i in range(2, 8):
        expected = Fraction(1)
        for j in range(1, i):
            expected /= bounds.dhat(j, 30, 2)
        assert bounds.psi_exact(0, 1, i - 1, 30, 2) == expected
    assert float(bounds.psi(0, 1, 1, 4, 2)) == approx(1 / 6)
    with pytest.raises(InputDomainError):
        bounds.psi_exact(1, 3, 1, 30, 2)


@pytest.mark.parametrize("n,k", [(30, 2), (30, 3), (64, 2), (64, 3)])
def test_psi_decreasing_in_first_coordinate(n, k):
    for m in range(12):
        for i in range(1, m + 2):
            for s in range(1, 13):
                assert bounds.psi_exact(m + 1, i, s, n, k) <= bounds.psi_exact(m, i, s, n, k)


def test_extension_bound_with_no_extension_is_eight_power():
    assert float(bounds.extension_bound(10, 2, 3, 3, 1, 0)) == approx(1.0)
    assert float(bounds.extension_bound(10, 2, 3, 3, 1, 2)) == approx(64 * float(bounds.psi(3, 1, 2, 10, 2)))


def test_overlap_bound():
    assert bounds.overlap_bound(2, 2, 1, 2) >= 2
    assert not bounds.overlap_bound(2, 2, 1, 1).is_zero
    with pytest.raises(InputDomainError):
        bounds.overlap_bound(2, 2, 1, 0)
    with pytest.raises(InputDomainError):
        bounds.overlap_bound(2, 2, 1, 3)


@pytest.mark.parametrize("n,k", GRID)
def test_phi_ratio_inequality(n, k):
    params = bounds.parameters(n, k)
    for j in range(params.D):
        ratio = bounds.phi(j + 1, n, k, params.p_star) / bounds.phi(j, n, k, params.p_star)
        rhs = LogNumber.from_log(MP.log(j + 1) - MP.log(n) + (j + 5 - 2 * MP.sqrt(n)) / 2 * MP.log(k))
        assert ratio <= rhs


@pytest.mark.parametrize("n,k", GRID + [(10 ** 4, 2)])
def test_c_is_bounded_and_nondecreasing(n, k):
    D = bounds.parameters(n, k).D
    # c(0) = 1 задано отдельно, монотонность с m = 1
    values = [bounds.c_const(m, n, k) for m in range(1, D + 1)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert values[-1] <= 100


def test_lower_bound_report_small_case():
    p_star = bounds.parameters(16, 2).p_star
    rep = bounds.lower_bound_report(16, 2, p_star)
    assert rep.D == 6
    assert rep.bottleneck_bound < 1
    assert rep.domination_holds
    assert rep.union_bound == rep.sum_t1 + rep.sum_t2
    assert rep.label == bounds.EXPLICIT_CONSTANTS


@pytest.mark.parametrize("n,k", GRID)
def test_single_term_dominates_first_part(n, k):
    rep = bounds.lower_bound_report(n, k, bounds.parameters(n, k).p_star)
    assert rep.domination_holds


def test_lower_bound_report_edges():
    rep = bounds.lower_bound_report(16, 2, 0)
    assert rep.sum_t1.is_zero and rep.bottleneck_bound.is_zero and rep.total_rhs.is_zero
    with pytest.raises(InputDomainError):
        bounds.lower_bound_report(2, 2, 0.1)
    with pytest.raises(InputDomainError):
        bounds.lower_bound_report(16, 2, 1)


@pytest.mark.parametrize("k", [2, 3])
def test_bottleneck_vanishes_along_n(k):
    values = []
    for n in (100, 400, 1600, 6400):
        rep = bounds.lower_bound_report(n, k, bounds.parameters(n, k).p_star)
        values.append(rep.expected_droplets)
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-3


def test_phi_table_warns_beyond_critical_dimension():
    table = bounds.phi_table(16, 2, 1e-3)
    assert list(table["m"]) == list(range(7))
    assert not table["beyond_critical"].any()
    with pytest.warns(UserWarning):
        wide = bounds.phi_table(16, 2, 1e-3, upto=9)
    assert wide["beyond_critical"].sum() == 3


def test_f_table_parts():
    table = bounds.f_table(100, 2, 1e-6)
    assert set(table["part"]) <= {"T1", "T2"}
    assert (table[table["part"] == "T1"]["ell"] <= 30).all()
    assert (table[table["part"] == "T2"]["ell"] > 30).all()


def test_second_moment_argmin_examples():
    rep = bounds.second_moment_report(16, 2, bounds.parameters(16, 2).p_upper_star)
    assert rep.argmin_i - 1 == 3
    assert rep.L == 8
    assert not rep.ratio_bound_infinite
    assert rep.ratio_bound == log_count(bounds.OVERLAP_CONSTANT * 16 ** 4) / rep.min_term


@pytest.mark.parametrize("n", [16, 100, 400])
def test_second_moment_argmin_near_root_n(n):
    rep = bounds.second_moment_report(n, 2, bounds.parameters(n, 2).p_upper_star)
    assert abs(rep.argmin_i - 1 - (math.isqrt(n) - 1)) <= 1
    assert rep.min_term == min(rep.terms)


@pytest.mark.parametrize("n,k", [(6400, 2), (10 ** 4, 2), (10 ** 4, 16)])
def test_second_moment_report_at_large_n(n, k):
    rep = bounds.second_moment_report(n, k, bounds.parameters(n, k).p_upper_star)
    assert rep.L == n // 2 and len(rep.terms) == n // 2 + 1
    assert not rep.ratio_bound_infinite
    assert not rep.expected_top.is_zero and not rep.delta_bound.is_zero
    assert rep.min_term == min(rep.terms)
    if k == 2:
        assert abs(rep.argmin_i - 1 - (math.isqrt(n) - 1)) <= 1


def test_overlap_bound_at_large_n():
    n, k, L = 10 ** 4, 3, 5000
    value = bounds.overlap_bound(n, k, L, 1)
    expected = (
        MP.log(bounds.OVERLAP_CONSTANT) + MP.log(8) + 3 * MP.log(L + 1)
        + 2 * bounds.seq_count_log(n, k, L).ln - bounds.seq_count_log(n, k, 0).ln
    )
    assert abs(value.ln - expected) <= MP.mpf("1e-12") * abs(expected)
    assert float(bounds.seq_count_log(n, k, 0).ln) == approx(float(n * MP.log(k)))


def test_second_moment_zero_probability():
    rep = bounds.second_moment_report(16, 2, 0)
    assert rep.expected_top.is_zero
    assert rep.ratio_bound is None and rep.ratio_bound_infinite


def test_odd_case_bound():
    p = bounds.parameters(9, 2).p_upper_star
    rep = bounds.second_moment_report(9, 2, p)
    assert rep.odd_case_exact <= rep.odd_case_bound
    assert float(rep.odd_case_bound) < 1e-7
    with pytest.raises(InputDomainError):
        bounds.second_moment_report(3, 2, 0.1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

"""Тесты Монте-Карло: оценки, детерминизм по воркерам, бисекция, сетки."""

import math

import pytest

from percolation import montecarlo
from percolation.errors import BracketFailure, DiagnosticError, InputDomainError
from percolation.hamming import HammingSpace

SQUARE = HammingSpace(2, 2)


def exact_square(p):
    q = 1 - p
    return 2 * p ** 2 * q ** 2 + 4 * p ** 3 * q + p ** 4


def test_extreme_probabilities():
    assert montecarlo.estimate_percolation(SQUARE, 1.0, 200, 1, 1).p_hat == 1.0
    assert montecarlo.estimate_percolation(SQUARE, 0.0, 200, 1, 1).p_hat == 0.0
    est = montecarlo.estimate_percolation(HammingSpace(6, 3), 0.0, 50, 1, 1)
    assert est.hits == 0 and est.ci_low == 0.0


def test_estimate_matches_exact_value():
    trials = 10 ** 5
    est = montecarlo.estimate_percolation(SQUARE, 0.5, trials, master_seed=2024, workers=1)
    sigma = math.sqrt(7 / 16 * 9 / 16 / trials)
    assert abs(est.p_hat - 7 / 16) < 5 * sigma
    assert est.ci_low <= est.p_hat <= est.ci_high
    assert est.trials == trials and est.seed == 2024


def test_hits_do_not_depend_on_worker_count():
    space = HammingSpace(4, 2)
    hits = {
        w: montecarlo.estimate_percolation(space, 0.3, 3000, master_seed=99, workers=w).hits
        for w in (1, 2, 8)
    }
    assert len(set(hits.values())) == 1


def test_estimate_rejects_bad_arguments():
    with pytest.raises(InputDomainError):
        montecarlo.estimate_percolation(SQUARE, 1.5, 10, 1, 1)
    with pytest.raises(InputDomainError):
        montecarlo.estimate_percolation(SQUARE, 0.5, 0, 1, 1)
    with pytest.raises(InputDomainError):
        montecarlo.estimate_percolation(SQUARE, 0.5, 10, -1, 1)
    with pytest.raises(InputDomainError):
        montecarlo.estimate_percolation(SQUARE, 0.5, 10, 1, 0)


def test_wilson_interval():
    assert montecarlo.wilson_interval(0, 10)[0] == 0.0
    assert montecarlo.wilson_interval(10, 10)[1] == 1.0
    low, high = montecarlo.wilson_interval(50, 100)
    assert low < 0.5 < high
    z = 1.959964
    assert high - low == pytest.approx(2 * z * math.sqrt(0.25 / 100 + z ** 2 / 40000) / (1 + z ** 2 / 100), rel=1e-4)


def test_find_pc_square():
    root = 0.54064
    # вилка 5e-3 оставляет запас на шум оценки (отн. σ ≈ 2.5e-3)
    res = montecarlo.find_pc(SQUARE, target=0.5, rel_tol=5e-3, trials_per_probe=60000, master_seed=5, workers=1)
    assert abs(res.p_c / root - 1) < 1e-2
    assert res.low <= res.p_c <= res.high
    assert res.high / res.low < 1.005
    assert float(res) == res.p_c
    assert len(res.probes) >= 3


def test_find_pc_single_edge():
    res = montecarlo.find_pc(HammingSpace(1, 2), rel_tol=1e-2, trials_per_probe=40000, master_seed=8, workers=1)
    assert abs(res.p_c * math.sqrt(2) - 1) < 2e-2


def test_find_pc_unreachable_target():
    with pytest.raises(BracketFailure) as info:
        montecarlo.find_pc(SQUARE, target=1.0, trials_per_probe=200, master_seed=1, workers=1)
    assert isinstance(info.value, DiagnosticError)
    assert info.value.high["p_hat"] == 1.0
    assert "p_hat" in info.value.low


def test_find_pc_rejects_tiny_tolerance():
    with pytest.raises(InputDomainError):
        montecarlo.find_pc(SQUARE, rel_tol=1e-4, trials_per_probe=10, workers=1)


def test_sweep_endpoints():
    res = montecarlo.sweep(SQUARE, [0.0, 1.0], trials=100, master_seed=1, workers=1)
    assert list(res.table["p_hat"]) == [0.0, 1.0]
    assert list(res.table.columns) == montecarlo.SWEEP_COLUMNS
    assert res.violations == 0
    assert res.p_star < res.p_upper_star


def test_sweep_matches_polynomial():
    trials = 10 ** 5
    res = montecarlo.sweep(SQUARE, [0.25, 0.5, 0.75], trials=trials, master_seed=3, workers=2)
    for row in res.table.itertuples():
        exact = exact_square(row.p)
        assert abs(row.p_hat - exact) < 5 * math.sqrt(exact * (1 - exact) / trials)


def test_sweep_deduplicates_with_warning():
    with pytest.warns(UserWarning):
        res = montecarlo.sweep(SQUARE, [0.5, 0.5, 1.0], trials=20, master_seed=1, workers=1)
    assert list(res.table["p"]) == [0.5, 1.0]


def test_sweep_rejects_bad_grids():
    with pytest.raises(InputDomainError):
        montecarlo.sweep(SQUARE, [], trials=10, workers=1)
    with pytest.raises(InputDomainError):
        montecarlo.sweep(SQUARE, [0.5, 0.2], trials=10, workers=1)


def test_parse_grid():
    assert montecarlo.parse_grid("0.1:0.5:5") == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    assert montecarlo.parse_grid("1e-3:1e-1:3:log") == pytest.approx([1e-3, 1e-2, 1e-1])
    for bad in ("0.1:0.5", "0.1:0.5:0", "a:b:3", "0:1:3:log", "0.1:0.5:3:lin"):
        with pytest.raises(InputDomainError):
            montecarlo.parse_grid(bad)


def test_coupled_trials_are_monotone():
    grid = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9]
    space = HammingSpace(5, 2)
    for t in range(100):
        indicators = montecarlo.coupled_trial(space, grid, (12, t))
        assert all(b for a, b in zip(indicators, indicators[1:]) if a)
    assert montecarlo.check_coupling(space, grid, trials=100, master_seed=12) == 100


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

import numpy as np
import pytest

from snqi import classical as C
from snqi.errors import DimensionError, SnqiError


def test_identical_carriers_give_identity(rng):
    r = C.random_stochastic(3, 4, rng)
    res = C.classical_ensemble_map(r, r)
    assert res.feasible
    # identity is one solution; the reported one must reproduce the statistics
    assert np.max(np.abs(res.matrix.T @ r - r)) <= 1e-9
    assert C.classical_quantitativity_check(res, r, r)


def test_full_rank_identical_is_exactly_identity():
    r = np.array([[0.9, 0.2], [0.1, 0.8]])
    res = C.classical_ensemble_map(r, r)
    assert np.allclose(res.matrix, np.eye(2), atol=1e-9)


def test_perfect_carrier_reads_off_table(rng):
    t = C.random_stochastic(3, 4, rng)
    res = C.classical_ensemble_map(t, np.eye(4))
    assert np.allclose(res.matrix, t.T, atol=1e-9)


def test_garbled_pair_recovers_channel(rng):
    r = np.array([[0.8, 0.3], [0.2, 0.7]])
    m = np.array([[0.6, 0.1], [0.4, 0.9]])
    res = C.classical_ensemble_map(m @ r, r)
    assert np.allclose(res.matrix, m.T, atol=1e-9)
    assert C.classical_quantitativity_check(res, m @ r, r)


def test_random_pairs_are_quantitative():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        t, r, _ = C.random_simulable_pair(rng)
        res = C.classical_ensemble_map(t, r)
        assert res.feasible and res.residual <= 1e-9
        assert np.all(res.matrix >= 0)
        assert np.allclose(res.matrix.sum(axis=1), 1, atol=1e-9)
        assert C.classical_quantitativity_check(res, t, r)


def test_infeasible_pair_has_certificate():
    t = np.eye(3)
    r = np.full((3, 3), 1 / 3)
    res = C.classical_ensemble_map(t, r)
    assert not res.feasible
    a, b = C._constraints(t, r)
    y = res.certificate
    assert np.all(a.T @ y >= -1e-9) and b @ y < 0


def test_bad_tables_raise():
    with pytest.raises(DimensionError):
        C.classical_ensemble_map(np.zeros((0, 2)), np.eye(2))
    with pytest.raises(SnqiError):
        C.classical_ensemble_map(np.array([[0.5, 0.5], [0.2, 0.5]]), np.eye(2))


def test_invalid_effect_table_fails_check():
    r = np.eye(2)
    assert not C.classical_quantitativity_check(np.array([[1.0, 0.5], [0.0, 0.5]]), r, r)

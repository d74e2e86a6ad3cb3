import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snqi import qmat
from snqi.ensembles import rho_n, tau_n_delta
from snqi.errors import DimensionError, NotHermitianError, NotPositiveError
from snqi.qmat import I2, P0, SZ, SINGLET


def test_kron_matches_numpy(rng):
    a = qmat.random_hermitian(2, rng)
    b = qmat.random_hermitian(4, rng)
    assert np.allclose(qmat.kron(a, b), np.kron(a, b), atol=0, rtol=0)


def test_kron_small_cases():
    assert np.array_equal(qmat.kron(I2, I2), np.eye(4))
    assert np.allclose(qmat.kron(SZ, P0), np.diag([1, 0, -1, 0]))
    rz = np.diag([1.0, 0.0])
    assert np.allclose(qmat.kron(rz, rz), np.diag([1.0, 0, 0, 0]))


def test_kron_batched(rng):
    a = np.stack([qmat.random_hermitian(2, rng) for _ in range(3)])
    b = qmat.random_hermitian(2, rng)
    out = qmat.kron(a, b)
    for k in range(3):
        assert np.allclose(out[k], np.kron(a[k], b))


def _ptrace_loops(m, keep_first):
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                if keep_first:
                    out[i, j] += m[2 * i + k, 2 * j + k]
                else:
                    out[i, j] += m[2 * k + i, 2 * k + j]
    return out


def test_partial_trace_against_loops(rng):
    m = qmat.random_density(4, rng)
    assert np.allclose(qmat.partial_trace(m, 0, [2, 2]), _ptrace_loops(m, True), atol=1e-14)
    assert np.allclose(qmat.partial_trace(m, 1, [2, 2]), _ptrace_loops(m, False), atol=1e-14)


def test_partial_trace_product_and_singlet(rng):
    a, b = qmat.random_hermitian(2, rng), qmat.random_hermitian(2, rng)
    ab = qmat.kron(a, b)
    assert np.allclose(qmat.partial_trace(ab, 0, [2, 2]), a * np.trace(b), atol=1e-12)
    assert np.allclose(qmat.partial_trace(ab, 1, [2, 2]), b * np.trace(a), atol=1e-12)
    assert np.allclose(qmat.partial_trace(qmat.projector(SINGLET), 0, [2, 2]), I2 / 2, atol=1e-15)


def test_partial_trace_of_tau_flag_marginal(rng):
    for n in rng.normal(size=(5, 3)):
        n /= np.linalg.norm(n)
        for d in (0.0, 0.4, 1.0):
            assert np.allclose(qmat.partial_trace(tau_n_delta(n, d), 1, [2, 2]), I2 / 2, atol=1e-12)


def test_partial_trace_preserves_trace(rng):
    m = qmat.random_density(8, rng)
    for keep in (0, 1, 2, [0, 2]):
        assert abs(np.trace(qmat.partial_trace(m, keep, [2, 2, 2])) - 1) < 1e-12


def test_partial_trace_dimension_error():
    with pytest.raises(DimensionError):
        qmat.partial_trace(np.eye(4), 0, [2, 3])


def test_eigh_reconstruction_and_orthonormality(rng):
    for dim in (2, 4, 8, 16):
        m = qmat.random_hermitian(dim, rng)
        spec = qmat.eigh(m)
        assert np.all(np.diff(spec.eigenvalues) <= 0)
        assert np.max(np.abs(spec.reconstruct() - m)) <= 1e-10
        v = spec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10


def test_hermitize_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        qmat.hermitize(np.array([[0, 1], [0, 0]]))


def test_vn_entropy_values(rng):
    assert qmat.vn_entropy(I2 / 2) == pytest.approx(1.0, abs=1e-14)
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    assert qmat.vn_entropy(rho_n(n)) == pytest.approx(0.0, abs=1e-12)


def test_vn_entropy_tau_formula(rng):
    n = np.array([0.6, 0.0, 0.8])
    for d in (0.1, 0.3, 0.9):
        # eigenvalues (1 - d/2)/2 and d/4, each twice
        lam = np.array([(1 - d / 2) / 2, d / 4] * 2)
        want = -np.sum(lam * np.log2(lam))
        alt = 1 - (1 - d / 2) * np.log2(1 - d / 2) - (d / 2) * np.log2(d / 2)
        assert want == pytest.approx(alt, abs=1e-14)
        assert qmat.vn_entropy(tau_n_delta(n, d)) == pytest.approx(want, abs=1e-12)


def test_vn_entropy_rejects_negative():
    with pytest.raises(NotPositiveError):
        qmat.vn_entropy(np.diag([1.5, -0.5]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 8]))
def test_vn_entropy_unitary_invariance(seed, dim):
    r = np.random.default_rng(seed)
    rho = qmat.random_density(dim, r)
    u = qmat.random_unitary(dim, r)
    s = qmat.vn_entropy(rho)
    assert 0 <= s <= np.log2(dim) + 1e-12
    assert abs(qmat.vn_entropy(u @ rho @ u.conj().T) - s) <= 1e-10


def test_matrix_sqrt_cases(rng):
    assert np.allclose(qmat.matrix_sqrt(np.eye(4)), np.eye(4))
    assert np.allclose(qmat.matrix_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]))
    p = rho_n(np.array([0.0, 0.6, 0.8]))
    assert np.allclose(qmat.matrix_sqrt(p), p, atol=1e-12)
    m = qmat.random_density(8, rng)
    r = qmat.matrix_sqrt(m)
    assert np.max(np.abs(r @ r - m)) <= 1e-10
    assert np.linalg.eigvalsh(r).min() >= -1e-12


def test_matrix_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveError):
        qmat.matrix_sqrt(SZ)


def test_pairwise_fidelity_pure_states(rng):
    for _ in range(10):
        n, m = rng.normal(size=(2, 3))
        n /= np.linalg.norm(n)
        m /= np.linalg.norm(m)
        assert qmat.pairwise_fidelity(rho_n(n), rho_n(m)) == pytest.approx(np.sqrt((1 + n @ m) / 2), abs=1e-7)


def test_permutation_matrix_reorders_factors(rng):
    a, b, c = (qmat.random_hermitian(2, rng) for _ in range(3))
    p = qmat.permutation_matrix([2, 0, 1], [2, 2, 2])
    assert np.allclose(p @ qmat.kron(a, b, c) @ p.T, qmat.kron(c, a, b))

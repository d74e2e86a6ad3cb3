"""Statistical maps between probabilistic (commuting) carriers.

A classical carrier is a column-stochastic table ``r[j, x] = r(j|x)``.
Simulating carrier ``t`` by carrier ``r`` means finding effects
``E'_i = sum_j e[j, i] |j><j|`` with ``t(i|x) = sum_j e[j, i] r(j|x)``,
``e >= 0`` and ``sum_i e[j, i] = 1``.  The map L: |i><i| -> E'_i is then
automatically a channel, and so is L (x) L.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog, minimize

from .errors import DimensionError, SnqiError

FEAS_TOL = 1e-9


@dataclass(frozen=True)
class ClassicalMap:
    """Result of the simulation search.

    ``matrix[j, i]`` is e'(j, i) when feasible.  When infeasible,
    ``certificate`` is a vector y with A^T y >= 0 and b.y < 0 for the
    constraint system A vec(e) = b, which rules out any e >= 0.
    """

    feasible: bool
    matrix: Optional[np.ndarray]
    residual: float
    certificate: Optional[np.ndarray] = None


def _check_table(tab, name):
    tab = np.asarray(tab, dtype=float)
    if tab.ndim != 2 or tab.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-d table", got=tab.shape)
    if np.any(tab < -1e-12) or np.max(np.abs(tab.sum(axis=0) - 1)) > 1e-9:
        raise SnqiError(f"{name} is not column-stochastic")
    return tab


def _constraints(t, r):
    """Equalities on vec(e) (row-major over (j, i))."""
    n_i, n_x = t.shape
    n_j = r.shape[0]
    rows, rhs = [], []
    # statistics: sum_j e[j,i] r[j,x] = t[i,x]
    for i in range(n_i):
        for x in range(n_x):
            a = np.zeros((n_j, n_i))
            a[:, i] = r[:, x]
            rows.append(a.ravel())
            rhs.append(t[i, x])
    # completeness: sum_i e[j,i] = 1
    for j in range(n_j):
        a = np.zeros((n_j, n_i))
        a[j, :] = 1.0
        rows.append(a.ravel())
        rhs.append(1.0)
    return np.array(rows), np.array(rhs)


def _farkas(a, b):
    """y with A^T y >= 0 and b.y < 0, or None."""
    m = a.shape[0]
    res = linprog(b, A_ub=-a.T, b_ub=np.zeros(a.shape[1]), bounds=[(-1, 1)] * m, method="highs")
    if res.status == 0 and res.fun < -FEAS_TOL:
        return res.x
    return None


def classical_ensemble_map(tau_probs, rho_probs):
    """Find the stochastic effect table reproducing t from r, or certify none exists.

    Among feasible tables the one with the smallest sum of squared entries
    is returned, so the answer does not depend on the LP vertex.
    """
    t = _check_table(tau_probs, "tau_probs")
    r = _check_table(rho_probs, "rho_probs")
    if t.shape[1] != r.shape[1]:
        raise DimensionError("tables must share the alphabet x", expected=r.shape[1], got=t.shape[1])
    n_i, n_j = t.shape[0], r.shape[0]
    a, b = _constraints(t, r)
    nvar = n_i * n_j

    lp = linprog(np.zeros(nvar), A_eq=a, b_eq=b, bounds=[(0, None)] * nvar, method="highs")
    if lp.status != 0:
        cert = _farkas(a, b)
        return ClassicalMap(False, None, float("inf"), cert)

    # minimum-norm solution of the equalities; keep it if it is already >= 0
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    if x.min() < -1e-13:
        res = minimize(
            lambda v: v @ v, np.clip(lp.x, 0, None), jac=lambda v: 2 * v,
            constraints=[{"type": "eq", "fun": lambda v: a @ v - b, "jac": lambda v: a}],
            bounds=[(0, None)] * nvar, method="SLSQP", options={"ftol": 1e-15, "maxiter": 500},
        )
        x = res.x if res.success and np.max(np.abs(a @ res.x - b)) < FEAS_TOL else lp.x
    x = np.clip(x, 0.0, None)
    residual = float(np.max(np.abs(a @ x - b)))
    return ClassicalMap(True, x.reshape(n_j, n_i), residual)


def classical_quantitativity_check(L, tau_probs, rho_probs, tol=1e-9):
    """Brute-force the doubled identity t(i1|x)t(i2|x) = sum (L(x)L)(j1 j2, i1 i2) r(j1|x)r(j2|x).

    Also requires L (x) L to be a valid effect table (entries >= 0, each
    input row summing to at most one).
    """
    e = L.matrix if isinstance(L, ClassicalMap) else np.asarray(L, dtype=float)
    t = np.asarray(tau_probs, dtype=float)
    r = np.asarray(rho_probs, dtype=float)
    ee = np.kron(e, e)
    if ee.min() < -tol or np.max(ee.sum(axis=1)) > 1 + tol:
        return False
    n_i, n_x = t.shape
    for x in range(n_x):
        rr = np.kron(r[:, x], r[:, x])
        for i1, i2 in itertools.product(range(n_i), repeat=2):
            lhs = t[i1, x] * t[i2, x]
            rhs = float(ee[:, i1 * n_i + i2] @ rr)
            if abs(lhs - rhs) > tol:
                return False
    return True


def random_stochastic(rows, cols, rng):
    m = rng.random((rows, cols)) + 1e-3
    return m / m.sum(axis=0, keepdims=True)


def random_simulable_pair(rng, n_x=None, n_j=None, n_i=None):
    """(t, r, M) with t = M r for a random channel M and full-row-rank r."""
    n_x = n_x or int(rng.integers(2, 5))
    n_j = n_j or int(rng.integers(2, n_x + 1))
    n_i = n_i or int(rng.integers(2, 5))
    r = random_stochastic(n_j, n_x, rng)
    m = random_stochastic(n_i, n_j, rng)
    return m @ r, r, m

"""Geometry and integration on the unit sphere S2.

Directions are float arrays of shape ``(3,)`` (or ``(N, 3)`` for batches).
Integrals are taken against the normalized uniform measure, so the
integral of the constant 1 is exactly 1.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError, NonFiniteError
from .qmat import I2, PAULI, SY

log = logging.getLogger(__name__)

UP = np.array([0.0, 0.0, 1.0])

DEFAULT_THETA_NODES = 64
DEFAULT_PHI_NODES = 64
DEFAULT_MC_SAMPLES = 10**6
DEFAULT_SEED = 20_240_915


def direction(x, y=None, z=None, tol=1e-12):
    """Validate (or build) a unit vector."""
    v = np.asarray(x if y is None else (x, y, z), dtype=float)
    if v.shape[-1] != 3:
        raise DimensionError("directions have three components", got=v.shape)
    norm = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norm - 1) > tol):
        raise DimensionError(f"not a unit vector (norm {norm})")
    return v


def from_angles(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def to_angles(n):
    n = np.asarray(n, dtype=float)
    theta = np.arccos(np.clip(n[..., 2], -1.0, 1.0))
    phi = np.arctan2(n[..., 1], n[..., 0])
    return theta, phi


def bloch_ket(n):
    """|n> = cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>."""
    theta, phi = to_angles(n)
    return np.stack(
        [np.cos(theta / 2) + 0j, np.sin(theta / 2) * np.exp(1j * phi)], axis=-1
    )


def flipped_ket(n):
    """Spin-flipped partner of |n>: i sigma_y |n>^*, a ket for direction -n.

    Unlike ``bloch_ket(-n)`` this is covariant: a phase on |n> turns into the
    opposite phase here, so ``|n> (x) flipped_ket(n)`` is gauge invariant.
    """
    return np.einsum("ij,...j->...i", 1j * SY, np.conj(bloch_ket(n)))


def rotation_matrix(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def rotation_to(n):
    """Rotation carrying UP to ``n``: about UP x n by arccos(n_z).

    The antipode -UP uses a half turn about the x axis.
    """
    n = direction(n, tol=1e-10)
    axis = np.cross(UP, n)
    s = np.linalg.norm(axis)
    if s < 1e-15:
        if n[2] > 0:
            return np.eye(3)
        return rotation_matrix([1.0, 0.0, 0.0], np.pi)
    return rotation_matrix(axis / s, np.arccos(np.clip(n[2], -1.0, 1.0)))


def su2_of_rotation(r):
    """Unitary U with U (v . sigma) U^dagger = (R v) . sigma.

    Determined up to a global sign.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or abs(np.linalg.det(r) - 1) > 1e-10:
        raise DimensionError("expected a proper 3x3 rotation", got=r.shape)
    # quaternion (w, x, y, z) of R, branch picked on the largest component
    t = np.trace(r)
    cand = np.array([1 + t, 1 + 2 * r[0, 0] - t, 1 + 2 * r[1, 1] - t, 1 + 2 * r[2, 2] - t])
    k = int(np.argmax(cand))
    q = np.empty(4)
    q[k] = np.sqrt(cand[k]) / 2
    f = 4 * q[k]
    if k == 0:
        q[1:] = [(r[2, 1] - r[1, 2]) / f, (r[0, 2] - r[2, 0]) / f, (r[1, 0] - r[0, 1]) / f]
    elif k == 1:
        q[0], q[2], q[3] = (r[2, 1] - r[1, 2]) / f, (r[0, 1] + r[1, 0]) / f, (r[0, 2] + r[2, 0]) / f
    elif k == 2:
        q[0], q[1], q[3] = (r[0, 2] - r[2, 0]) / f, (r[0, 1] + r[1, 0]) / f, (r[1, 2] + r[2, 1]) / f
    else:
        q[0], q[1], q[2] = (r[1, 0] - r[0, 1]) / f, (r[0, 2] + r[2, 0]) / f, (r[1, 2] + r[2, 1]) / f
    q /= np.linalg.norm(q)
    return q[0] * I2 - 1j * (q[1] * PAULI[0] + q[2] * PAULI[1] + q[3] * PAULI[2])


def su2_to(n):
    """Shortcut for ``su2_of_rotation(rotation_to(n))``."""
    return su2_of_rotation(rotation_to(n))


def tetrahedron_directions():
    """Vertices of the regular tetrahedron with one vertex at UP."""
    s2 = np.sqrt(2.0)
    return np.array(
        [
            [0.0, 0.0, 1.0],
            [2 * s2 / 3, 0.0, -1 / 3],
            [-s2 / 3, np.sqrt(2 / 3), -1 / 3],
            [-s2 / 3, -np.sqrt(2 / 3), -1 / 3],
        ]
    )


def random_directions(count, rng):
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes and weights realizing the normalized uniform measure on S2."""

    nodes: np.ndarray
    weights: np.ndarray
    scheme: str
    seed: Optional[int] = None
    settings: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.weights)


def gauss_legendre_product(n_theta=DEFAULT_THETA_NODES, n_phi=DEFAULT_PHI_NODES):
    """Gauss-Legendre in u = cos(theta) times the uniform rule in phi."""
    u, wu = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    uu, pp = np.meshgrid(u, phi, indexing="ij")
    s = np.sqrt(1 - uu**2)
    nodes = np.stack([s * np.cos(pp), s * np.sin(pp), uu], axis=-1).reshape(-1, 3)
    weights = np.repeat(wu / 2, n_phi) / n_phi
    return SphereQuadrature(
        nodes, weights, "gauss-legendre-product",
        settings={"theta_nodes": n_theta, "phi_nodes": n_phi},
    )


def monte_carlo(samples=DEFAULT_MC_SAMPLES, seed=DEFAULT_SEED):
    """Uniform random nodes with equal weights from a seeded generator."""
    log.info("monte-carlo sphere quadrature: samples=%d seed=%d", samples, seed)
    rng = np.random.default_rng(seed)
    nodes = random_directions(samples, rng)
    weights = np.full(samples, 1.0 / samples)
    return SphereQuadrature(
        nodes, weights, "monte-carlo", seed=seed,
        settings={"mc_samples": samples, "seed": seed},
    )


def _values(q, f, batched, chunk):
    if not batched:
        return np.array([f(n) for n in q.nodes], dtype=float)
    parts = [
        np.asarray(f(q.nodes[i:i + chunk]), dtype=float)
        for i in range(0, len(q.nodes), chunk)
    ]
    return np.concatenate(parts)


def evaluate(q: SphereQuadrature, f: Callable, batched=False, chunk=8192):
    """Integrand values on every node, refusing NaN and inf."""
    vals = _values(q, f, batched, chunk)
    if vals.shape != q.weights.shape:
        raise DimensionError("integrand must be scalar per node", got=vals.shape)
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise NonFiniteError(f"integrand not finite at node {bad}: {q.nodes[bad]}")
    return vals


def integrate(q: SphereQuadrature, f: Callable, batched=False, workers=None, chunk=8192):
    """Sum of w_i f(n_i).

    With ``batched=True`` the integrand receives an ``(N, 3)`` array of nodes
    and returns ``N`` values. ``workers`` splits the node list over threads
    and adds the partial sums pairwise.
    """
    if not workers or workers <= 1:
        return float(np.dot(q.weights, evaluate(q, f, batched, chunk)))
    pieces = np.array_split(np.arange(len(q.weights)), workers)

    def partial(idx):
        sub = SphereQuadrature(q.nodes[idx], q.weights[idx], q.scheme, q.seed)
        return float(np.dot(sub.weights, evaluate(sub, f, batched, chunk)))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        sums = list(pool.map(partial, pieces))
    while len(sums) > 1:
        sums = [sum(sums[i:i + 2]) for i in range(0, len(sums), 2)]
    return sums[0]


def integrate_with_error(q: SphereQuadrature, f: Callable, batched=False, chunk=8192):
    """Estimate and its standard error (meaningful for monte-carlo rules)."""
    vals = evaluate(q, f, batched, chunk)
    mean = float(np.dot(q.weights, vals))
    if q.scheme != "monte-carlo":
        return mean, 0.0
    return mean, float(np.std(vals, ddof=1) / np.sqrt(len(vals)))


def integrate_polar(g: Callable, n=DEFAULT_THETA_NODES):
    """Integral of an axially symmetric integrand given as g(cos theta).

    Uses n-point Gauss-Legendre on [-1, 1] with the factor 1/2 of the
    uniform measure; ``g`` receives the whole node array.
    """
    u, w = np.polynomial.legendre.leggauss(n)
    vals = np.asarray(g(u), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("polar integrand not finite")
    return float(np.dot(w, vals) / 2)

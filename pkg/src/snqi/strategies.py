"""Measurement strategies: POVMs paired with guess directions.

Covariant POVMs are stored by their seed effect at UP together with the
group representation that moves it around the sphere; they are never
discretized.  The tetrahedral strategy for two copies of the flagged
carrier is a four-outcome POVM on H H H' H'.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from . import qmat
from .errors import DimensionError, DomainError, SolverError
from .morphisms import j_morphism
from .qmat import I2, P0, P1, SX, SY, SZ, SINGLET, kron, ket_kron, projector
from .sphere import bloch_ket, flipped_ket, su2_to, tetrahedron_directions

POVM_TOL = 1e-10
PHASE_TOL = 1e-12

SQ3 = np.sqrt(3.0)
#: antiparallel-state coefficients
TETRA_A = (3 * SQ3 + 1) / (4 * np.sqrt(2.0))
TETRA_B = (SQ3 - 1) / (4 * np.sqrt(2.0))


@dataclass(frozen=True)
class FinitePOVM:
    effects: np.ndarray  # (k, d, d)
    labels: Sequence

    @property
    def dim(self):
        return self.effects.shape[-1]

    def completeness_error(self):
        return float(np.max(np.abs(self.effects.sum(axis=0) - np.eye(self.dim))))

    def min_eigenvalue(self):
        return float(min(np.linalg.eigvalsh(qmat.hermitize(e)).min() for e in self.effects))

    def check(self, tol=POVM_TOL):
        if self.completeness_error() > tol:
            raise SolverError("effects do not sum to identity", self.completeness_error())
        if self.min_eigenvalue() < -tol:
            raise SolverError("effect with negative eigenvalue", -self.min_eigenvalue())
        return self


@dataclass(frozen=True)
class CovariantPOVM:
    """Continuous POVM m -> V(m) E_up V(m)^dagger.

    ``representation`` maps the SU(2) element for the rotation UP -> m to
    the unitary acting on the measured space.
    """

    seed: np.ndarray
    copies: int
    representation: Callable

    @property
    def dim(self):
        return self.seed.shape[-1]

    def effect_at(self, m):
        v = self.representation(su2_to(m))
        return v @ self.seed @ v.conj().T

    def orbit_average(self, q):
        acc = np.zeros_like(self.seed, dtype=complex)
        for w, m in zip(q.weights, q.nodes):
            acc += w * self.effect_at(m)
        return acc


@dataclass(frozen=True)
class MeasurementStrategy:
    """A POVM and its guess rule; ``guesses is None`` means g(m) = m."""

    povm: object
    guesses: Optional[np.ndarray]
    label: str
    params: dict

    @property
    def is_covariant(self):
        return isinstance(self.povm, CovariantPOVM)

    def guess(self, y):
        if self.guesses is None:
            return np.asarray(y, dtype=float)
        return self.guesses[y]


def _standard(u):
    return u


def _flagged(u):
    """Action of the same rotation on the flagged carrier H (x) H'."""
    return kron(u, P0) + kron(SY @ u.conj() @ SY, P1)


def _pair(u):
    return kron(u, u)


def single_copy_covariant(r3, carrier="rho"):
    """Seed E_up = 1 + r3 sigma_z, guess g(m) = m.

    ``carrier="tau"`` lifts the seed through J to the flagged carrier, where
    it is covariant under U (x) |0><0| + sigma_y U^* sigma_y (x) |1><1|.
    """
    if not -1.0 <= r3 <= 1.0:
        raise DomainError("r3", r3, "[-1, 1]")
    seed = I2 + r3 * SZ
    if carrier == "rho":
        povm = CovariantPOVM(seed, 1, _standard)
    elif carrier == "tau":
        povm = CovariantPOVM(j_morphism()(seed), 1, _flagged)
    else:
        raise DomainError("carrier", carrier, "{'rho', 'tau'}")
    return MeasurementStrategy(povm, None, f"cov1(r3={r3:g},{carrier})", {"r3": r3})


def two_copy_seed(alpha, gamma):
    """1 + (alpha/2)(Z1 + Z2) + (gamma/4)(2 Z Z - X X - Y Y).

    Eigenvalues 1 + alpha + gamma/2 on |00>, 1 - alpha + gamma/2 on |11>,
    1 - gamma on the triplet m=0 and 1 on the singlet.
    """
    zz = 2 * kron(SZ, SZ) - kron(SX, SX) - kron(SY, SY)
    return np.eye(4) + alpha / 2 * (kron(SZ, I2) + kron(I2, SZ)) + gamma / 4 * zz


def two_copy_region_ok(alpha, gamma, tol=1e-12):
    return alpha <= gamma / 2 + 1 + tol and alpha >= -gamma / 2 - 1 - tol and gamma <= 1 + tol


def two_copy_covariant(alpha, gamma):
    """Covariant strategy on rho_n (x) rho_n parameterized by (alpha, gamma)."""
    if not two_copy_region_ok(alpha, gamma):
        raise DomainError("(alpha, gamma)", (alpha, gamma), "alpha <= gamma/2+1, alpha >= -gamma/2-1, gamma <= 1")
    povm = CovariantPOVM(two_copy_seed(alpha, gamma), 2, _pair)
    return MeasurementStrategy(
        povm, None, f"cov2(alpha={alpha:g},gamma={gamma:g})", {"alpha": alpha, "gamma": gamma}
    )


# --- analytic densities against the covariant seeds ---------------------------

def density_single(cos_theta, delta, r3):
    return (1 - delta) * r3 * np.asarray(cos_theta) + 1


def density_two_copy(cos_theta, alpha, gamma):
    c = np.asarray(cos_theta)
    return 0.75 * gamma * c**2 + alpha * c + 1 - gamma / 4


def density_parallel(cos_theta, delta):
    c, q = np.asarray(cos_theta), 1 - delta
    return (3 * q**2 * c**2 + 6 * q * c - (delta + 1) * (delta - 3)) / 16


def density_antiparallel(cos_theta, delta):
    c, q = np.asarray(cos_theta), 1 - delta
    return (3 * q**2 * c**2 + 2 * SQ3 * q * c - (delta**2 - 2 * delta - 1)) / 8


def density_tetra(cos_theta, delta):
    """tr[tau (x) tau E_0] as a function of the angle to n_0."""
    return (density_parallel(cos_theta, delta) + density_antiparallel(cos_theta, delta)) / 2


# --- tetrahedral states ---------------------------------------------------------

@dataclass(frozen=True)
class TetraPhases:
    phases: np.ndarray
    residual: float
    #: whether one phase shared by all four vectors would already do
    single_phase_feasible: bool


def _doubled_kets(kind):
    dirs = tetrahedron_directions()
    if kind == "+":
        k = bloch_ket(dirs)
    elif kind == "-":
        k = flipped_ket(dirs)
    else:
        raise DomainError("kind", kind, "{'+', '-'}")
    return ket_kron(k, k)


def _parallel_from(kets, phases):
    return SQ3 / 2 * np.exp(1j * np.asarray(phases))[:, None] * kets + SINGLET / 2


def _gram_error(vecs):
    g = vecs.conj() @ vecs.T
    return float(np.max(np.abs(g - np.eye(len(vecs)))))


def solve_tetra_phases(kind="+"):
    """Phases making sqrt(3)/2 e^{i phi_i}|m_i m_i> + |singlet>/2 orthonormal.

    phi_0 is fixed to 0.  Orthogonality of i, j needs
    e^{i(phi_j - phi_i)} <m_i|m_j>^2 = -1, so the pairs with index 0 fix
    the other phases; the remaining pairs are then a consistency check,
    polished by Gauss-Newton on the off-diagonal Gram entries.
    """
    kets = _doubled_kets(kind)
    phases = np.zeros(4)
    for j in range(1, 4):
        phases[j] = np.pi - np.angle(np.vdot(kets[0], kets[j]))
    residual = _gram_error(_parallel_from(kets, phases))
    if residual > PHASE_TOL:
        def offdiag(p):
            v = _parallel_from(kets, np.concatenate([[0.0], p]))
            g = v.conj() @ v.T
            iu = np.triu_indices(4, 1)
            return np.concatenate([g[iu].real, g[iu].imag])

        sol = least_squares(offdiag, phases[1:], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        phases = np.concatenate([[0.0], sol.x])
        residual = _gram_error(_parallel_from(kets, phases))
        if residual > PHASE_TOL:
            raise SolverError(f"no orthonormalizing phases for kind {kind}", residual)
    common = _gram_error(_parallel_from(kets, np.zeros(4)))
    return TetraPhases(np.mod(phases, 2 * np.pi), residual, common <= PHASE_TOL)


def parallel_states(kind="+"):
    """|A^kind_i>, i = 0..3, as rows."""
    return _parallel_from(_doubled_kets(kind), solve_tetra_phases(kind).phases)


def antiparallel_states(kind="+"):
    """|B^+_i> = a|n_i,-n_i> - b sum_{j!=i}|n_j,-n_j>, and the swapped family for '-'."""
    dirs = tetrahedron_directions()
    up, down = bloch_ket(dirs), flipped_ket(dirs)
    if kind == "+":
        pairs = ket_kron(up, down)
    elif kind == "-":
        pairs = ket_kron(down, up)
    else:
        raise DomainError("kind", kind, "{'+', '-'}")
    total = pairs.sum(axis=0)
    return (TETRA_A + TETRA_B) * pairs - TETRA_B * total


def tetra_two_copy_tau_povm():
    """Four effects on H H H' H'; flags 00 -> A+, 11 -> A-, 01 -> B+, 10 -> B-."""
    a_plus, a_minus = parallel_states("+"), parallel_states("-")
    b_plus, b_minus = antiparallel_states("+"), antiparallel_states("-")
    f = {(x, y): kron(p, q) for x, p in ((0, P0), (1, P1)) for y, q in ((0, P0), (1, P1))}
    effects = np.array(
        [
            kron(projector(a_plus[i]), f[0, 0])
            + kron(projector(b_plus[i]), f[0, 1])
            + kron(projector(b_minus[i]), f[1, 0])
            + kron(projector(a_minus[i]), f[1, 1])
            for i in range(4)
        ]
    )
    povm = FinitePOVM(effects, tuple(range(4))).check()
    return MeasurementStrategy(povm, tetrahedron_directions(), "tetra2(tau)", {})


def flag_blocks(effect):
    """Split a 16x16 effect on H H H' H' into its 4x4 spin blocks per flag pair."""
    if effect.shape != (16, 16):
        raise DimensionError("expected a 16x16 operator", got=effect.shape)
    t = effect.reshape(4, 4, 4, 4)  # (spins, flags, spins, flags)
    return {(x, y): t[:, 2 * x + y, :, 2 * x + y] for x in (0, 1) for y in (0, 1)}

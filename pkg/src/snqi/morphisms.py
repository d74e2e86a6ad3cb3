"""Superoperators in Choi form and the statistical morphisms between carriers.

Choi convention: ``C = sum_ij |i><j| (x) Phi(|i><j|)`` (input factor first),
so ``Phi(X) = tr_in[(X^T (x) 1) C]`` and Phi is completely positive iff C is
positive semidefinite.  Composition goes through the row-major transfer
matrix ``vec(Phi(X)) = S vec(X)``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qmat
from .ensembles import PAIR_ORDER, rho_n, rho_n_delta, tau_n_delta
from .errors import DimensionError, DomainError
from .qmat import P0, P1, SY, kron, partial_trace

CP_TOL = 1e-10
POSITIVITY_SAMPLES = 10_000
POSITIVITY_SEED = 7_001


@dataclass(frozen=True)
class Superoperator:
    """Linear map B(C^in_dim) -> B(C^out_dim) stored as its Choi matrix."""

    in_dim: int
    out_dim: int
    choi: np.ndarray
    label: str = ""

    def __post_init__(self):
        d = self.in_dim * self.out_dim
        if self.choi.shape != (d, d):
            raise DimensionError(f"Choi matrix of {self.label} must be {d}x{d}", got=self.choi.shape)

    @property
    def choi_tensor(self):
        i, o = self.in_dim, self.out_dim
        return self.choi.reshape(i, o, i, o)

    def __call__(self, x):
        x = np.asarray(x)
        if x.shape[-2:] != (self.in_dim, self.in_dim):
            raise DimensionError(
                f"{self.label} acts on {self.in_dim}x{self.in_dim} operators", got=x.shape
            )
        return np.einsum("...ij,iajb->...ab", x, self.choi_tensor)

    def transfer(self):
        i, o = self.in_dim, self.out_dim
        return self.choi_tensor.transpose(1, 3, 0, 2).reshape(o * o, i * i)

    def choi_eigenvalues(self):
        return np.linalg.eigvalsh(qmat.hermitize(self.choi))

    def is_unital(self, tol=1e-12):
        out = self(np.eye(self.in_dim))
        return bool(np.max(np.abs(out - np.eye(self.out_dim))) <= tol)


def from_function(fn: Callable, in_dim, out_dim, label=""):
    """Tabulate a linear map on matrix units into its Choi matrix."""
    c = np.zeros((in_dim, out_dim, in_dim, out_dim), dtype=complex)
    for i in range(in_dim):
        for j in range(in_dim):
            unit = np.zeros((in_dim, in_dim), dtype=complex)
            unit[i, j] = 1.0
            c[i, :, j, :] = fn(unit)
    d = in_dim * out_dim
    return Superoperator(in_dim, out_dim, c.reshape(d, d), label)


def from_transfer(s, in_dim, out_dim, label=""):
    c = np.asarray(s).reshape(out_dim, out_dim, in_dim, in_dim).transpose(2, 0, 3, 1)
    d = in_dim * out_dim
    return Superoperator(in_dim, out_dim, c.reshape(d, d), label)


def compose(outer: Superoperator, inner: Superoperator, label=None):
    """outer o inner."""
    if inner.out_dim != outer.in_dim:
        raise DimensionError("cannot compose", expected=outer.in_dim, got=inner.out_dim)
    s = outer.transfer() @ inner.transfer()
    return from_transfer(s, inner.in_dim, outer.out_dim, label or f"{outer.label}o{inner.label}")


def tensor(a: Superoperator, b: Superoperator, label=None):
    """a (x) b acting on B(in_a (x) in_b)."""
    c = np.einsum("iajb,kcld->ikacjlbd", a.choi_tensor, b.choi_tensor)
    i, o = a.in_dim * b.in_dim, a.out_dim * b.out_dim
    return Superoperator(i, o, c.reshape(i * o, i * o), label or f"{a.label}(x){b.label}")


def identity_map(dim=2):
    return from_function(lambda e: e, dim, dim, "id")


def transpose_map(dim=2):
    return from_function(lambda e: e.T, dim, dim, "T")


def spin_flip_map():
    """E -> sigma_y E^T sigma_y, the (positive, not CP) map rho_n -> rho_-n."""
    return from_function(lambda e: SY @ e.T @ SY, 2, 2, "SFlip")


def _lambda0_fn(e):
    upper = partial_trace(e @ kron(np.eye(2), P0), 0, [2, 2])
    lower = partial_trace(e @ kron(np.eye(2), P1), 0, [2, 2])
    return 0.5 * upper + 0.5 * SY @ lower.T @ SY


def lambda0():
    """Statistical morphism B(H (x) H') -> B(H) taking tau-statistics to rho'-statistics."""
    return from_function(_lambda0_fn, 4, 2, "Lambda_0")


def conj_depolarizer(delta):
    """Heisenberg-picture depolarizer E -> (1-d) E + d tr(E) 1/2."""
    if not 0.0 <= delta <= 1.0:
        raise DomainError("delta", delta, "[0, 1]")
    return from_function(
        lambda e: (1 - delta) * e + delta * np.trace(e) * np.eye(2) / 2, 2, 2, f"D_{delta:g}"
    )


def lambda_delta(delta):
    return compose(conj_depolarizer(delta), lambda0(), f"Lambda_{delta:g}")


def j_morphism():
    """B(H) -> B(H (x) H'): E -> E (x) |0><0| + sigma_y E^T sigma_y (x) |1><1|."""
    return from_function(lambda e: kron(e, P0) + kron(SY @ e.T @ SY, P1), 2, 4, "J")


# --- statistical identities -------------------------------------------------

def tr_prod(a, b):
    """tr[a b] for batches, real part."""
    return np.einsum("...ij,...ji->...", a, b).real


def lambda_residual(lam: Superoperator, delta, effects, nodes):
    """max |tr[Lambda(E) rho_n] - tr[E tau_{n,delta}]| over effects x nodes."""
    rho = rho_n(nodes)
    tau = tau_n_delta(nodes, delta)
    worst = 0.0
    for e in effects:
        lhs = tr_prod(lam(e)[None], rho)
        rhs = tr_prod(e[None], tau)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def j_residual(j: Superoperator, delta, effects, nodes):
    """max |tr[J(E) tau_{n,delta}] - tr[E rho_{n,delta}]|."""
    rho = rho_n_delta(nodes, delta)
    tau = tau_n_delta(nodes, delta)
    worst = 0.0
    for e in effects:
        lhs = tr_prod(j(e)[None], tau)
        rhs = tr_prod(e[None], rho)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# --- positivity ---------------------------------------------------------------

@dataclass(frozen=True)
class PositivityReport:
    choi_min_eig: float
    is_cp: bool
    positivity_samples: int
    min_output_eig: float

    @property
    def verdict(self):
        if self.is_cp:
            return "CP (certified)"
        if self.min_output_eig >= -CP_TOL:
            return "positive (sampled), not CP"
        return "not positive (witness found)"


def random_psd_inputs(dim, samples, rng):
    """Half rank-one projectors, half Wishart mixtures of random rank."""
    n_pure = samples // 2
    g = rng.normal(size=(n_pure, dim)) + 1j * rng.normal(size=(n_pure, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    pure = qmat.projector(g)
    ranks = rng.integers(1, dim + 1, size=samples - n_pure)
    mixed = np.empty((samples - n_pure, dim, dim), dtype=complex)
    for k, r in enumerate(ranks):
        mixed[k] = qmat.random_density(dim, rng, rank=int(r))
    return np.concatenate([pure, mixed])


def positivity_report(s: Superoperator, samples=POSITIVITY_SAMPLES, seed=POSITIVITY_SEED):
    """Exact CP test from the Choi spectrum plus sampled positivity."""
    choi_min = float(s.choi_eigenvalues().min())
    rng = np.random.default_rng(seed)
    worst = np.inf
    for start in range(0, samples, 2048):
        batch = random_psd_inputs(s.in_dim, min(2048, samples - start), rng)
        out = s(batch)
        out = 0.5 * (out + qmat.dag(out))
        worst = min(worst, float(np.linalg.eigvalsh(out).min()))
    return PositivityReport(choi_min, choi_min >= -CP_TOL, samples, worst)


def entangled_witness():
    """Entangled PSD input on (H H')(x)(H H') that Lambda (x) Lambda sends outside PSD.

    Singlet on the two spins with flags |0>|1>: the first copy passes
    unchanged, the second gets the spin-flip transpose, which is a partial
    transpose of an entangled pure state.  Returned in native pair order.
    """
    e_pair = kron(qmat.projector(qmat.SINGLET), P0, P1)  # H H H' H'
    return PAIR_ORDER.T @ e_pair @ PAIR_ORDER


def doubled_output_min_eig(lam: Superoperator, effect):
    out = tensor(lam, lam)(effect)
    return float(np.linalg.eigvalsh(qmat.hermitize(out)).min())

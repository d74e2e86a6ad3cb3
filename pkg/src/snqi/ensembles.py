"""The two spin carriers and their noisy / doubled variants.

``rho_n`` is the pure qubit with Bloch vector n.  ``tau_n_delta`` lives on
H (x) H' where the flag qubit H' records whether the spin was flipped:

    tau = rho_{n,d} (x) |0><0| / 2 + rho_{-n,d} (x) |1><1| / 2

Basis order is H-major, H'-minor.  Doubled tau states are reordered to
H (x) H (x) H' (x) H' so that the flags sit at the end.
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SnqiError
from .qmat import I2, P0, P1, PAULI, kron, permutation_matrix
from .sphere import direction

#: native tau (x) tau order H1 H1' H2 H2'  ->  H1 H2 H1' H2'
PAIR_ORDER = permutation_matrix([0, 2, 1, 3], [2, 2, 2, 2])


def _check_delta(delta):
    if not 0.0 <= delta <= 1.0:
        raise DomainError("delta", delta, "[0, 1]")
    return float(delta)


def bloch_operator(v):
    """(1 + v . sigma)/2 for a batch of Bloch vectors v (not necessarily unit)."""
    v = np.asarray(v, dtype=float)
    out = np.broadcast_to(I2, v.shape[:-1] + (2, 2)).astype(complex)
    for k in range(3):
        out = out + v[..., k, None, None] * PAULI[k]
    return out / 2


def rho_n(n):
    """Pure spin state with Bloch vector n."""
    return bloch_operator(direction(n, tol=1e-10))


def rho_n_delta(n, delta):
    """Depolarized spin (1-d) rho_n + d 1/2, Bloch vector (1-d) n."""
    delta = _check_delta(delta)
    return bloch_operator((1 - delta) * direction(n, tol=1e-10))


def tau_n_delta(n, delta):
    """Flagged carrier on H (x) H'; the H' marginal is always 1/2."""
    delta = _check_delta(delta)
    n = direction(n, tol=1e-10)
    return (kron(rho_n_delta(n, delta), P0) + kron(rho_n_delta(-n, delta), P1)) / 2


@dataclass(frozen=True)
class Ensemble:
    """A family n -> state(n) over the uniform prior on S2.

    ``state_fn`` accepts a single direction or an ``(N, 3)`` batch.
    """

    state_fn: Callable
    dim: int
    copies: int
    label: str
    family: str
    delta: Optional[float] = None

    def state(self, n):
        return self.state_fn(n)

    def average(self, q):
        """Quadrature of the state itself, the ensemble's average state."""
        states = self.state_fn(q.nodes)
        return np.einsum("k,kij->ij", q.weights, states)


def rho_ensemble():
    return Ensemble(rho_n, 2, 1, "E_rho", "rho")


def rho_delta_ensemble(delta):
    delta = _check_delta(delta)
    return Ensemble(
        lambda n: rho_n_delta(n, delta), 2, 1, f"E_rho'(delta={delta:g})", "rho_delta", delta
    )


def tau_ensemble(delta):
    delta = _check_delta(delta)
    return Ensemble(
        lambda n: tau_n_delta(n, delta), 4, 1, f"E_tau(delta={delta:g})", "tau", delta
    )


def two_copies(e: Ensemble) -> Ensemble:
    """Ensemble of rho(n) (x) rho(n); tau pairs come out as H H H' H'."""
    if e.copies != 1:
        raise SnqiError(f"{e.label} is already doubled")
    base = e.state_fn
    if e.family == "tau":
        def fn(n):
            s = base(n)
            return PAIR_ORDER @ kron(s, s) @ PAIR_ORDER.T
    else:
        def fn(n):
            s = base(n)
            return kron(s, s)
    return replace(e, state_fn=fn, dim=e.dim**2, copies=2, label=f"{e.label}^(x)2")

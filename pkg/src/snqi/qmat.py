"""Small dense complex linear algebra on qubit registers.

Everything here is plain ``numpy.ndarray``; operators never exceed 16x16.
Most functions accept a leading batch axis so that sphere quadratures can
evaluate thousands of nodes in one call.
"""

from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import DimensionError, NotDensityError, NotHermitianError, NotPositiveError

HERM_TOL = 1e-10
CLAMP_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
P0 = np.outer(KET0, KET0)
P1 = np.outer(KET1, KET1)

#: (|01> - |10>)/sqrt(2) in the computational basis.
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def dag(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_error(m):
    return float(np.max(np.abs(m - dag(m))))


def hermitize(m, tol=HERM_TOL):
    """Return (M + M^dagger)/2, refusing matrices that are not nearly Hermitian."""
    m = np.asarray(m, dtype=complex)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"max |M - M^dagger| = {err:.3e}")
    return 0.5 * (m + dag(m))


def kron(*ops):
    """Tensor product, broadcasting over leading batch axes.

    ``kron(a, b)[..., i*db + k, j*db + l] == a[..., i, j] * b[..., k, l]``.
    """
    if not ops:
        raise DimensionError("kron needs at least one operand")
    out = np.asarray(ops[0])
    for b in ops[1:]:
        b = np.asarray(b)
        if out.ndim < 2 or b.ndim < 2:
            raise DimensionError("kron operands must be matrices")
        prod = out[..., :, None, :, None] * b[..., None, :, None, :]
        shape = prod.shape[:-4] + (out.shape[-2] * b.shape[-2], out.shape[-1] * b.shape[-1])
        out = prod.reshape(shape)
    return out


def ket_kron(*kets):
    out = np.asarray(kets[0])
    for k in kets[1:]:
        out = (out[..., :, None] * np.asarray(k)[..., None, :]).reshape(
            out.shape[:-1] + (out.shape[-1] * k.shape[-1],)
        )
    return out


def projector(ket):
    ket = np.asarray(ket, dtype=complex)
    return ket[..., :, None] * ket[..., None, :].conj()


def partial_trace(m, keep: Union[int, Sequence[int]], dims: Sequence[int]):
    """Trace out every subsystem not listed in ``keep``.

    Subsystem ``k`` has dimension ``dims[k]``; the kept factors stay in
    their original order.
    """
    m = np.asarray(m)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape[-2:] != (total, total):
        raise DimensionError(
            f"dims {dims} need a {total}x{total} matrix", expected=total, got=m.shape[-2:]
        )
    keep = [keep] if np.isscalar(keep) else list(keep)
    nsys = len(dims)
    if any(k < 0 or k >= nsys for k in keep):
        raise DimensionError(f"keep={keep} out of range for {nsys} subsystems")
    batch = m.shape[:-2]
    t = m.reshape(batch + tuple(dims) + tuple(dims))
    nb = len(batch)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:nsys])
    col = list(letters[nsys:2 * nsys])
    for k in range(nsys):
        if k not in keep:
            col[k] = row[k]
    bl = "ABCDEFGH"[:nb]
    out_idx = bl + "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    spec = bl + "".join(row) + "".join(col) + "->" + out_idx
    res = np.einsum(spec, t)
    dk = int(np.prod([dims[k] for k in keep]))
    return res.reshape(batch + (dk, dk))


def permute_subsystems(m, perm: Sequence[int], dims: Sequence[int]):
    """Reorder tensor factors: output factor ``k`` is input factor ``perm[k]``."""
    p = permutation_matrix(perm, dims)
    return p @ m @ p.T


def permutation_matrix(perm: Sequence[int], dims: Sequence[int]):
    """Real orthogonal matrix P with P (x_0 (x) ... ) = x_perm[0] (x) x_perm[1] ..."""
    dims = list(dims)
    total = int(np.prod(dims))
    idx = np.arange(total).reshape(dims)
    new = np.transpose(idx, perm).reshape(-1)
    p = np.zeros((total, total))
    p[np.arange(total), new] = 1.0
    return p


def eigh(m) -> Spectrum:
    """Hermitian eigendecomposition with eigenvalues in descending order."""
    w, v = np.linalg.eigh(hermitize(m))
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def _clamped_eigvals(m, what):
    w = np.linalg.eigvalsh(hermitize(m))
    if w.min() < -CLAMP_TOL:
        raise NotPositiveError(f"{what}: negative eigenvalue", float(w.min()))
    return np.clip(w, 0.0, None)


def check_density(m, tol=1e-12):
    """Validate and return a density operator (Hermitian, trace one, PSD)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("density operator must be a square matrix", got=m.shape)
    tr = np.trace(m)
    if abs(tr - 1) > tol:
        raise NotDensityError(f"trace {tr.real:.15g} differs from 1")
    w = np.linalg.eigvalsh(hermitize(m))
    if w.min() < -tol:
        raise NotDensityError(f"negative eigenvalue {w.min():.3e}")
    return m


def vn_entropy(rho) -> float:
    """von Neumann entropy in bits, with 0 log 0 = 0."""
    w = _clamped_eigvals(rho, "vn_entropy")
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def matrix_sqrt(m):
    """Principal square root of a positive semidefinite matrix."""
    spec = eigh(m)
    w = spec.eigenvalues
    if w.min() < -CLAMP_TOL:
        raise NotPositiveError("matrix_sqrt of a non-PSD matrix", float(w.min()))
    v = spec.eigenvectors
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def pairwise_fidelity(rho1, rho2) -> float:
    """tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) (root fidelity, not squared).

    Computed as the trace norm of sqrt(rho1) sqrt(rho2), which avoids taking
    square roots of round-off eigenvalues when the states are nearly pure.
    """
    prod = matrix_sqrt(rho1) @ matrix_sqrt(rho2)
    return float(np.sum(np.linalg.svd(prod, compute_uv=False)))


def random_unitary(dim, rng):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (z + z.conj().T)


def random_pure_state(dim, rng):
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def random_density(dim, rng, rank=None):
    """Wishart-distributed density matrix of the given rank (full by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real

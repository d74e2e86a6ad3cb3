"""Information measures for (ensemble, strategy) pairs.

Every closed form here has a quadrature counterpart that evaluates the same
quantity from explicit traces, so each analytic value can be checked
independently.  Logarithms are base 2.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import qmat
from .ensembles import rho_ensemble, tau_ensemble, two_copies
from .errors import DomainError, SnqiError, UnknownEnsembleError
from .morphisms import j_morphism, j_residual, lambda_delta, lambda_residual
from .sphere import gauss_legendre_product, random_directions
from .strategies import (
    CovariantPOVM,
    density_tetra,
    single_copy_covariant,
    tetra_two_copy_tau_povm,
    two_copy_covariant,
    two_copy_region_ok,
)

LN2 = np.log(2.0)
SQ3 = np.sqrt(3.0)
POLAR_NODES = 256
D_ZERO_TOL = 1e-9
SMALL_GAMMA = 1e-5
GAMMA_ANCHOR = 1e-4
#: 7 - 4 sqrt(3): where the tetrahedral lower bound meets 3/4
FIDELITY_CROSSOVER = 7 - 4 * SQ3
RHO2_MI_MAX = np.log2(3.0) - 2 / (3 * LN2)


@dataclass(frozen=True)
class MeasureResult:
    value: float
    method: str
    params: dict = field(default_factory=dict)
    ensemble_label: str = ""
    strategy_label: str = ""

    def __float__(self):
        return float(self.value)


def _xlog2(p):
    """p log2 p with 0 log 0 = 0, elementwise."""
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * np.log2(safe), 0.0)


def _clog2(coef, x):
    """coef * log2(x), taken as 0 when x = 0 (the coefficient vanishes there too)."""
    if x <= 0:
        return 0.0
    return coef * np.log2(x)


def _meridian(n):
    """Gauss-Legendre nodes in cos(theta) along phi = 0 and their weights on [-1, 1]."""
    u, w = np.polynomial.legendre.leggauss(n)
    nodes = np.stack([np.sqrt(1 - u**2), np.zeros_like(u), u], axis=-1)
    return u, w / 2, nodes


def _traces(states, effect):
    return np.einsum("kij,ji->k", states, effect).real


def _check_dims(e, povm):
    if e.dim != povm.dim:
        raise SnqiError(f"{e.label} has dimension {e.dim} but the POVM acts on {povm.dim}")


# --- averaged fidelity -----------------------------------------------------------

def averaged_fidelity(e, s, q=None, polar_nodes=POLAR_NODES):
    """Average score (1 + n.g)/2 of strategy ``s`` on ensemble ``e``.

    Covariant strategies reduce to one integral over the angle to UP,
    evaluated from traces against the seed effect.  Finite strategies sum
    over outcomes on the quadrature ``q``.
    """
    _check_dims(e, s.povm)
    if isinstance(s.povm, CovariantPOVM):
        _, w, nodes = _meridian(polar_nodes)
        p = _traces(e.state(nodes), s.povm.seed)
        value = float(np.dot(w, p * (1 + nodes[:, 2]) / 2))
        method = "quadrature"
    else:
        q = q or gauss_legendre_product()
        states = e.state(q.nodes)
        value = 0.0
        for y, eff in enumerate(s.povm.effects):
            score = (1 + q.nodes @ s.guess(y)) / 2
            value += float(np.dot(q.weights, _traces(states, eff) * score))
        method = "quadrature"
    return MeasureResult(value, method, dict(s.params), e.label, s.label)


def fidelity_single_rho_opt():
    return MeasureResult(2 / 3, "analytic", {"r3": 1.0}, "E_rho", "cov1(r3=1)")


def fidelity_single_tau_opt(delta):
    if not 0 <= delta <= 1:
        raise DomainError("delta", delta, "[0, 1]")
    return MeasureResult(2 / 3 - delta / 6, "analytic", {"delta": delta, "r3": 1.0}, "E_tau", "cov1(r3=1)")


def fidelity_single(delta, r3):
    """1/2 + r3 (1 - delta)/6 for the covariant family on the flagged carrier."""
    return 0.5 + r3 * (1 - delta) / 6


def fidelity_double_rho(alpha=1.5, gamma=1.0):
    if not two_copy_region_ok(alpha, gamma):
        raise DomainError("(alpha, gamma)", (alpha, gamma), "positivity region")
    return MeasureResult(0.5 + alpha / 6, "analytic", {"alpha": alpha, "gamma": gamma}, "E_rho^2", "cov2")


def fidelity_double_tau_lb(delta):
    if not 0 <= delta <= 1:
        raise DomainError("delta", delta, "[0, 1]")
    value = (2 * SQ3 + 15) / 24 - (2 * SQ3 + 3) * delta / 24
    return MeasureResult(value, "analytic", {"delta": delta}, "E_tau^2", "tetra2(tau)")


def fidelity_double_tau_reduced(delta, polar_nodes=POLAR_NODES):
    """Four equal outcome contributions, each one integral around n_0 = UP.

    Uses 16-dimensional traces against E_0 on a meridian, relying on the
    axial symmetry of tr[tau (x) tau E_0] about n_0.
    """
    strat = tetra_two_copy_tau_povm()
    ens = two_copies(tau_ensemble(delta))
    _, w, nodes = _meridian(polar_nodes)
    p = _traces(ens.state(nodes), strat.povm.effects[0])
    value = 4 * float(np.dot(w, p * (1 + nodes[:, 2]) / 2))
    return MeasureResult(value, "quadrature", {"delta": delta}, ens.label, strat.label)


# --- mutual information --------------------------------------------------------

def mutual_information(e, s, q=None, polar_nodes=POLAR_NODES):
    """Information between the direction and the outcome, in bits.

    Covariant strategies use the one-dimensional reduction
    ``int p(n) log p(n)/pbar dn`` with ``p(n) = tr[state(n) E_up]``.
    """
    _check_dims(e, s.povm)
    if isinstance(s.povm, CovariantPOVM):
        _, w, nodes = _meridian(polar_nodes)
        p = _traces(e.state(nodes), s.povm.seed)
        pbar = float(np.dot(w, p))
        value = float(np.dot(w, _xlog2(p))) - pbar * np.log2(pbar)
    else:
        q = q or gauss_legendre_product()
        states = e.state(q.nodes)
        value = 0.0
        for eff in s.povm.effects:
            p = _traces(states, eff)
            py = float(np.dot(q.weights, p))
            if py > 0:
                value += float(np.dot(q.weights, _xlog2(p))) - py * np.log2(py)
    return MeasureResult(max(value, 0.0) if value > -1e-10 else value, "quadrature",
                         dict(s.params), e.label, s.label)


def mi_single_closed_form(r):
    """Covariant single-copy information as a function of r = (1 - delta) r3."""
    r = float(r)
    if abs(r) > 1:
        raise DomainError("r", r, "[-1, 1]")
    a = abs(r)
    if a == 0:
        return 0.0
    if a == 1:
        return 1 - 1 / (2 * LN2)
    if a < 1e-2:
        return sum(a**k / (k * (k - 1) * (k + 1)) for k in range(2, 16, 2)) / LN2
    return (
        0.5 * (a / 2 + 1 + 1 / (2 * a)) * np.log2(1 + a)
        - 0.5 * (a / 2 - 1 + 1 / (2 * a)) * np.log2(1 - a)
        - 1 / (2 * LN2)
    )


def discriminant(alpha, gamma):
    return alpha**2 + 0.75 * gamma**2 - 3 * gamma


def _mi_rho2_gamma_nonzero(alpha, gamma):
    d = discriminant(alpha, gamma)
    k = alpha / 3 - 4 * alpha**3 / (27 * gamma**2) + 2 * alpha / (3 * gamma)
    base = (gamma / 3 + 4 * alpha**2 / (9 * gamma) - 8 / 3) / LN2
    lp, lm = gamma / 2 + 1 + alpha, gamma / 2 + 1 - alpha
    if abs(d) < D_ZERO_TOL:
        total = _clog2(k + 1, lp) + _clog2(1 - k, lm) + base
    elif d < 0:
        root = np.sqrt(-d)
        arc = np.arctan((alpha + 1.5 * gamma) / root) - np.arctan((alpha - 1.5 * gamma) / root)
        total = _clog2(k + 1, lp) + _clog2(1 - k, lm) + base + 8 * (-d) ** 1.5 / (27 * gamma**2 * LN2) * arc
    else:
        x = 4 * d**1.5 / (27 * gamma**2)
        total = (
            _clog2(k + 1 - x, lp) + _clog2(1 - k - x, lm) + base
            + _clog2(x, (1 - gamma + np.sqrt(d)) ** 2)
        )
    return 0.5 * total


def mi_double_rho_closed_form(alpha, gamma):
    """Covariant two-copy information on the pure-spin ensemble.

    Case split on gamma = 0 and the sign of the discriminant of the
    density as a quadratic in cos(theta).  Very small |gamma| loses digits
    to cancellation, so it is interpolated linearly between gamma = 0 and
    gamma = +-GAMMA_ANCHOR.
    """
    alpha, gamma = float(alpha), float(gamma)
    if not two_copy_region_ok(alpha, gamma):
        raise DomainError("(alpha, gamma)", (alpha, gamma), "alpha <= gamma/2+1, alpha >= -gamma/2-1, gamma <= 1")
    if gamma == 0:
        return mi_single_closed_form(alpha)
    if abs(gamma) < SMALL_GAMMA and abs(alpha) <= 1:
        anchor = np.copysign(GAMMA_ANCHOR, gamma)
        a_lo = mi_single_closed_form(alpha)
        a_hi = _mi_rho2_gamma_nonzero(alpha, anchor)
        return a_lo + (a_hi - a_lo) * gamma / anchor
    return _mi_rho2_gamma_nonzero(alpha, gamma)


def mi_double_tau_closed_form(delta):
    """Two-copy information of the flagged carrier under the tetrahedral POVM."""
    if not 0 <= delta < 1:
        raise DomainError("delta", delta, "[0, 1)")
    q = 1 - delta
    c = (3 + 2 * SQ3) / 4
    k = (3 + 2 * SQ3) / 24 * q * (1 + (87 - 12 * SQ3) / (81 * q * q))
    rad = 51 - 12 * SQ3 - 27 * q * q
    value = (
        (k + 0.5) * np.log2(0.75 * q * q + c * q + 1)
        - (k - 0.5) * np.log2(0.75 * q * q - c * q + 1)
        + (q * q + (4 * SQ3 - 41) / 9) / (4 * LN2)
    )
    root = np.sqrt(rad)
    value += rad**1.5 / (972 * q * LN2) * (
        np.arctan((3 + 2 * SQ3 + 9 * q) / root) - np.arctan((3 + 2 * SQ3 - 9 * q) / root)
    )
    return float(value)


def mi_double_tau(delta):
    """As the closed form, with the fully depolarized end point taken as its limit 0."""
    if delta == 1:
        return 0.0
    return mi_double_tau_closed_form(delta)


def mi_double_tau_reduced(delta, polar_nodes=POLAR_NODES):
    """4 int tr[tau (x) tau E_0] log(4 tr[...]) dn from 16-dimensional traces."""
    strat = tetra_two_copy_tau_povm()
    ens = two_copies(tau_ensemble(delta))
    _, w, nodes = _meridian(polar_nodes)
    p = _traces(ens.state(nodes), strat.povm.effects[0])
    value = 4 * (float(np.dot(w, _xlog2(p))) + 2 * float(np.dot(w, p)))
    return MeasureResult(value, "quadrature", {"delta": delta}, ens.label, strat.label)


def mi_double_tau_density_quadrature(delta, polar_nodes=POLAR_NODES):
    """Same integral from the analytic density, for separating density from trace errors."""
    u, w, _ = _meridian(polar_nodes)
    p = density_tetra(u, delta)
    return 4 * (float(np.dot(w, _xlog2(p))) + 2 * float(np.dot(w, p)))


# --- quantum measures ------------------------------------------------------------

def holevo_chi(e, q=None):
    """S(average state) - average S(state), by quadrature."""
    if e.copies != 1:
        raise SnqiError("holevo_chi expects a single-copy ensemble")
    q = q or gauss_legendre_product()
    states = e.state(q.nodes)
    avg = np.einsum("k,kij->ij", q.weights, states)
    ent = np.linalg.eigvalsh(qmat.hermitize(states))
    ent = np.clip(ent, 0.0, None)
    mean_s = float(np.dot(q.weights, -_xlog2(ent).sum(axis=1)))
    value = qmat.vn_entropy(avg) - mean_s
    return MeasureResult(value, "quadrature", {"delta": e.delta}, e.label, "")


def holevo_chi_tau_closed_form(delta):
    h = 0.0
    for p in (1 - delta / 2, delta / 2):
        if p > 0:
            h += p * np.log2(p)
    return 1 + h


def algebra_dimension(states, tol=1e-9, max_rounds=8):
    """Dimension of the associative algebra generated by ``states``."""
    states = np.asarray(states)
    d = states.shape[-1]

    def basis_of(mats):
        vecs = mats.reshape(len(mats), -1)
        _, s, vh = np.linalg.svd(vecs, full_matrices=False)
        rank = int(np.sum(s > tol * max(s[0], 1.0)))
        return vh[:rank].reshape(rank, d, d)

    basis = basis_of(states)
    for _ in range(max_rounds):
        prods = np.einsum("aij,bjk->abik", basis, basis).reshape(-1, d, d)
        grown = basis_of(np.concatenate([basis, prods]))
        if len(grown) == len(basis):
            break
        basis = grown
    return len(basis)


def blind_rate(e, samples=30, seed=11):
    """Blind compression rate from the known closed forms, plus an algebra diagnostic."""
    rng = np.random.default_rng(seed)
    states = e.state(random_directions(samples, rng))
    dim = algebra_dimension(states)
    if e.copies != 1:
        raise UnknownEnsembleError(f"no blind-rate closed form for {e.label}")
    if e.family == "rho":
        return 1.0, dim
    if e.family == "tau":
        return (0.0 if e.delta == 1 else 2.0), dim
    raise UnknownEnsembleError(f"no blind-rate closed form for {e.label}")


# --- verdict -------------------------------------------------------------------

@dataclass(frozen=True)
class SnqiVerdict:
    delta: float
    f_single_rho: float
    f_single_tau: float
    f_double_rho: float
    f_double_tau_lb: float
    cond1: bool
    cond2: bool
    cond3_evidence: dict

    @property
    def snqi(self):
        return self.cond1 and self.cond2


def morphism_evidence(delta, effects=20, nodes=10, seed=5):
    rng = np.random.default_rng(seed)
    eff4 = [qmat.random_hermitian(4, rng) for _ in range(effects)]
    eff2 = [qmat.random_hermitian(2, rng) for _ in range(effects)]
    dirs = random_directions(nodes, rng)
    return {
        "lambda_residual": lambda_residual(lambda_delta(delta), delta, eff4, dirs),
        "j_residual": j_residual(j_morphism(), delta, eff2, dirs),
        "effects": effects,
        "nodes": nodes,
        "seed": seed,
    }


def snqi_verdict(delta, evidence=True):
    if not 0 <= delta <= 1:
        raise DomainError("delta", delta, "[0, 1]")
    f1r = fidelity_single_rho_opt().value
    f1t = fidelity_single_tau_opt(delta).value
    f2r = fidelity_double_rho().value
    f2t = fidelity_double_tau_lb(delta).value
    return SnqiVerdict(
        delta, f1r, f1t, f2r, f2t,
        f1r > f1t + 1e-12,
        f2t > f2r + 1e-12,
        morphism_evidence(delta) if evidence else {},
    )


def fidelity_crossover():
    """delta where the tetrahedral lower bound drops to the two-copy pure-spin optimum."""
    return brentq(lambda d: fidelity_double_tau_lb(d).value - fidelity_double_rho().value,
                  0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def mi_crossover():
    """delta where the flagged two-copy information meets the covariant pure-spin maximum."""
    target = mi_double_rho_closed_form(1.5, 1.0)
    return brentq(lambda d: mi_double_tau_closed_form(d) - target, 0.0, 0.5, xtol=1e-14)


# --- optimizers ------------------------------------------------------------------

@dataclass(frozen=True)
class OptimumResult:
    x: tuple
    value: float
    grid_x: tuple
    evaluations: int


def _refine_1d(fun, lo, hi, x0):
    """Bounded Brent around the grid optimum; keep the grid point if it is better."""
    if hi - lo < 1e-15:
        return x0, fun(x0)
    res = minimize_scalar(lambda x: -fun(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    # the maximum often sits on a bound, which Brent only approaches
    cands = [(fun(x), x) for x in (x0, float(res.x), lo, hi)]
    best = max(cands)
    return best[1], best[0]


def optimize_single_fidelity(delta, step=0.01):
    """Maximize the single-copy covariant fidelity over r3 in [-1, 1]."""
    grid = np.round(np.arange(-1.0, 1.0 + step / 2, step), 12)
    vals = fidelity_single(delta, grid)
    i = int(np.argmax(vals))
    lo, hi = max(-1.0, grid[i] - step), min(1.0, grid[i] + step)
    x, v = _refine_1d(lambda r: fidelity_single(delta, r), lo, hi, float(grid[i]))
    return OptimumResult((x,), float(v), (float(grid[i]),), len(grid))


def _alpha_bounds(gamma, sign):
    top = gamma / 2 + 1
    return (0.0, top) if sign > 0 else (-top, 0.0)


def optimize_two_copy_mi(sign=+1, step=0.01, sweeps=4):
    """Maximize the covariant two-copy information over the alpha >= 0 (or <= 0) half.

    Grid over gamma in [-2, 1] and feasible alpha, then alternating bounded
    Brent searches on each coordinate, clipped to the positivity region.
    """
    best, count = (-np.inf, 0.0, 0.0), 0
    for gamma in np.round(np.arange(-2.0, 1.0 + step / 2, step), 12):
        lo, hi = _alpha_bounds(gamma, sign)
        for alpha in np.round(np.arange(lo, hi + step / 2, step), 12):
            alpha = min(max(alpha, lo), hi)
            v = mi_double_rho_closed_form(alpha, gamma)
            count += 1
            if v > best[0]:
                best = (v, float(alpha), float(gamma))
    v, alpha, gamma = best
    grid_x = (alpha, gamma)
    for _ in range(sweeps):
        glo = max(-2.0, gamma - step, 2 * abs(alpha) - 2)
        ghi = min(1.0, gamma + step)
        gamma, v = _refine_1d(lambda g: mi_double_rho_closed_form(alpha, g), glo, ghi, gamma)
        lo, hi = _alpha_bounds(gamma, sign)
        alo, ahi = max(lo, alpha - step), min(hi, alpha + step)
        alpha, v = _refine_1d(lambda a: mi_double_rho_closed_form(a, gamma), alo, ahi, alpha)
        count += 2
    return OptimumResult((alpha, gamma), float(v), grid_x, count)


def covariant_strategies_at_optimum():
    """The strategies the optimizers land on, for quadrature confirmation."""
    return single_copy_covariant(1.0, "tau"), two_copy_covariant(1.5, 1.0)


def default_ensembles(delta):
    return rho_ensemble(), tau_ensemble(delta)

"""Acceptance checks, one per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest -v tests/test_acceptance.py``) or directly as a
script to get just the eight summary lines.
"""

import sys
import time

import numpy as np

from snqi import classical, measures, morphisms, qmat, strategies
from snqi.ensembles import rho_ensemble, rho_n, tau_ensemble, tau_n_delta, two_copies
from snqi.sphere import from_angles, gauss_legendre_product, random_directions

LN2 = np.log(2)
XOVER = 7 - 4 * np.sqrt(3)


def _report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} | {detail}"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return line


def criterion_1():
    start = time.perf_counter()
    q = gauss_legendre_product()
    rows = []
    for d in (0.0, 0.03, XOVER, 0.5, 1.0):
        tau, tau2 = tau_ensemble(d), two_copies(tau_ensemble(d))
        rows.append((
            measures.averaged_fidelity(rho_ensemble(), strategies.single_copy_covariant(1.0)).value - 2 / 3,
            measures.averaged_fidelity(tau, strategies.single_copy_covariant(1.0, "tau")).value - (2 / 3 - d / 6),
            measures.averaged_fidelity(two_copies(rho_ensemble()), strategies.two_copy_covariant(1.5, 1.0)).value - 0.75,
            measures.averaged_fidelity(tau2, strategies.tetra_two_copy_tau_povm(), q).value
            - ((2 * np.sqrt(3) + 15) / 24 - (2 * np.sqrt(3) + 3) * d / 24),
        ))
    elapsed = time.perf_counter() - start
    worst = float(np.max(np.abs(rows)))
    ok = worst <= 1e-8 and elapsed < 10
    return ok, f"max |quadrature - table| = {worst:.2e} (tol 1e-8), runtime {elapsed:.2f}s (< 10s)"


def criterion_2():
    below = measures.snqi_verdict(0.0717, evidence=False).cond2
    above = measures.snqi_verdict(0.0719, evidence=False).cond2
    root = measures.fidelity_crossover()
    err = abs(root - XOVER)
    ok = below and not above and err <= 1e-9
    return ok, f"cond2(0.0717)={below}, cond2(0.0719)={above}, |root - (7-4sqrt3)| = {err:.1e} (tol 1e-9)"


def criterion_3():
    mi1 = measures.mi_single_closed_form(1.0)
    q1 = measures.mutual_information(rho_ensemble(), strategies.single_copy_covariant(1.0)).value
    mi2 = measures.mi_double_rho_closed_form(1.5, 1.0)
    q2 = measures.mutual_information(two_copies(rho_ensemble()), strategies.two_copy_covariant(1.5, 1.0)).value
    mi3 = measures.mi_double_tau_closed_form(0.0)
    q3 = measures.mi_double_tau_reduced(0.0).value
    gaps = [abs(mi1 - q1), abs(mi2 - q2), abs(mi3 - q3)]
    # exact expressions where they exist; quoted decimals to one unit in their last digit
    anchors = [
        abs(mi1 - (1 - 1 / (2 * LN2))) <= 1e-12 and abs(mi1 - 0.2787) <= 1e-4,
        abs(mi2 - (np.log2(3) - 2 / (3 * LN2))) <= 1e-12 and abs(mi2 - 0.6231) <= 1e-4,
        abs(mi3 - 0.718) <= 1e-3,
    ]
    xo = measures.mi_crossover()
    ok = max(gaps) <= 1e-7 and all(anchors) and abs(xo - 0.0575) <= 2e-3
    return ok, (f"values {mi1:.4f}, {mi2:.4f}, {mi3:.4f}; max |closed - quadrature| = {max(gaps):.1e} (tol 1e-7); "
                f"MI crossover delta = {xo:.5f} (0.0575 +- 0.002)")


def criterion_4():
    rng = np.random.default_rng(4)
    eff4 = [qmat.random_hermitian(4, rng) for _ in range(50)]
    eff2 = [qmat.random_hermitian(2, rng) for _ in range(50)]
    nodes = random_directions(20, rng)
    deltas = (0.0, 0.03, 0.5, 1.0)
    res, choi, sampled = 0.0, {}, {}
    for d in deltas:
        lam = morphisms.lambda_delta(d)
        res = max(res, morphisms.lambda_residual(lam, d, eff4, nodes),
                  morphisms.j_residual(morphisms.j_morphism(), d, eff2, nodes))
        rep = morphisms.positivity_report(lam, samples=10_000)
        choi[d], sampled[d] = rep.choi_min_eig, rep.min_output_eig
    not_cp = {d: v < -1e-6 for d, v in choi.items()}
    positive = all(v >= -1e-10 for v in sampled.values())
    ok = res <= 1e-12 and all(not_cp.values()) and positive
    bad = [d for d, flag in not_cp.items() if not flag]
    detail = (f"max identity residual {res:.1e} (tol 1e-12); Choi min eig "
              + ", ".join(f"{d:g}:{v:+.4f}" for d, v in choi.items())
              + f"; sampled outputs PSD: {positive}")
    if bad:
        detail += f"; Choi matrix is PSD (map is CP) at delta = {bad}"
    return ok, detail


def criterion_5():
    strat = strategies.tetra_two_copy_tau_povm()
    comp = strat.povm.completeness_error()
    mineig = strat.povm.min_eigenvalue()
    rng = np.random.default_rng(5)
    a0, b0 = strategies.parallel_states("+")[0], strategies.antiparallel_states("+")[0]
    worst = 0.0
    for _ in range(100):
        th, ph, d = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.random()
        n = from_angles(th, ph)
        rp = (1 - d) * rho_n(n) + d * np.eye(2) / 2
        rm = (1 - d) * rho_n(-n) + d * np.eye(2) / 2
        pa = np.vdot(a0, qmat.kron(rp, rp) @ a0).real
        pb = np.vdot(b0, qmat.kron(rp, rm) @ b0).real
        worst = max(worst, abs(pa - strategies.density_parallel(np.cos(th), d)),
                    abs(pb - strategies.density_antiparallel(np.cos(th), d)))
    ok = comp <= 1e-10 and mineig >= -1e-10 and worst <= 1e-12
    return ok, f"completeness {comp:.1e} (tol 1e-10), min effect eig {mineig:.1e}, density gap {worst:.1e} (tol 1e-12)"


def criterion_6():
    r3 = measures.optimize_single_fidelity(0.03).x[0]
    plus = measures.optimize_two_copy_mi(+1).x
    minus = measures.optimize_two_copy_mi(-1).x
    e1 = abs(r3 - 1)
    e2 = max(abs(plus[0] - 1.5), abs(plus[1] - 1))
    e3 = max(abs(minus[0] + 1.5), abs(minus[1] - 1))
    ok = max(e1, e2, e3) <= 1e-4
    return ok, (f"r3 = {r3:.8f}; (alpha, gamma) = ({plus[0]:.6f}, {plus[1]:.6f}) and twin "
                f"({minus[0]:.6f}, {minus[1]:.6f}); max error {max(e1, e2, e3):.1e} (tol 1e-4)")


def criterion_7():
    q = gauss_legendre_product()
    chi_rho = measures.holevo_chi(rho_ensemble(), q).value
    chi_gap = max(abs(measures.holevo_chi(tau_ensemble(d), q).value - measures.holevo_chi_tau_closed_form(d))
                  for d in (0.0, 0.03, 0.5, 0.9, 1.0))
    br_rho = measures.blind_rate(rho_ensemble())
    br_half = measures.blind_rate(tau_ensemble(0.5))
    br_one = measures.blind_rate(tau_ensemble(1.0))
    rng = np.random.default_rng(7)
    fp = 0.0
    for n, m in zip(random_directions(100, rng), random_directions(100, rng)):
        fp = max(fp, abs(qmat.pairwise_fidelity(rho_n(n), rho_n(m))
                         - qmat.pairwise_fidelity(tau_n_delta(n, 0), tau_n_delta(m, 0))))
    checks = [
        abs(chi_rho - 1) <= 1e-8,
        chi_gap <= 1e-8,
        br_rho[0] == 1,
        br_half == (2, 16),
        br_one == (0, 1),
        fp <= 1e-10,
    ]
    detail = (f"chi(E_rho) = {chi_rho:.10f}, chi(E_tau) gap {chi_gap:.1e}; blind_rate "
              f"E_rho {br_rho}, E_tau(0.5) {br_half} (expected (2, 16)), E_tau(1) {br_one}; "
              f"pairwise fidelity gap {fp:.1e}")
    return all(checks), detail


def criterion_8():
    rng = np.random.default_rng(8)
    passed = 0
    for _ in range(50):
        t, r, _m = classical.random_simulable_pair(rng)
        res = classical.classical_ensemble_map(t, r)
        passed += bool(res.feasible and classical.classical_quantitativity_check(res, t, r))
    witness = morphisms.doubled_output_min_eig(morphisms.lambda_delta(0.03), morphisms.entangled_witness())
    ok = passed == 50 and witness < -1e-6
    return ok, f"classical pairs passing {passed}/50; Lambda (x) Lambda witness min eig {witness:.4f} (< -1e-6)"


CRITERIA = [
    (1, "averaged-fidelity table", criterion_1),
    (2, "sNQI window", criterion_2),
    (3, "mutual-information anchors", criterion_3),
    (4, "morphism identities and non-CP witness", criterion_4),
    (5, "tetrahedral POVM validity", criterion_5),
    (6, "optimizer recovery", criterion_6),
    (7, "quantum-measure anchors", criterion_7),
    (8, "classical contrast", criterion_8),
]


def _check(number):
    _, title, fn = CRITERIA[number - 1]
    ok, detail = fn()
    line = _report(number, title, ok, detail)
    assert ok, line


def test_criterion_1_fidelity_table():
    _check(1)


def test_criterion_2_snqi_window():
    _check(2)


def test_criterion_3_mutual_information():
    _check(3)


def test_criterion_4_morphisms():
    _check(4)


def test_criterion_5_povm():
    _check(5)


def test_criterion_6_optimizers():
    _check(6)


def test_criterion_7_quantum_measures():
    _check(7)


def test_criterion_8_classical_contrast():
    _check(8)


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        _report(number, title, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)

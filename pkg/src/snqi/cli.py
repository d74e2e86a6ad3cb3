"""Command-line front end: ``snqi table|sweep|verify|figure|choi|povm``.

Exit codes: 0 when everything passes, 1 when a verification check fails,
2 for usage errors (bad arguments, out-of-range parameters, unwritable
output paths).
"""

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from . import classical, measures, morphisms, qmat, strategies
from .ensembles import rho_ensemble, tau_ensemble, two_copies
from .errors import SnqiError
from .sphere import (
    DEFAULT_MC_SAMPLES,
    DEFAULT_PHI_NODES,
    DEFAULT_SEED,
    DEFAULT_THETA_NODES,
    gauss_legendre_product,
    integrate_with_error,
    monte_carlo,
    random_directions,
)

log = logging.getLogger("snqi")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepRecord:
    delta: float
    f_single_rho: float
    f_single_tau: float
    f_double_rho: float
    f_double_tau_lb: float
    mi_single_rho: float
    mi_single_tau: float
    mi_double_rho: float
    mi_double_tau: float
    chi_rho: float
    chi_tau: float
    snqi: bool


@dataclass
class VerifyReport:
    suite: str
    seed: int
    checks: list

    def add(self, name, residual, tolerance):
        residual = float(residual)
        self.checks.append(
            {"name": name, "residual": residual, "tolerance": tolerance, "pass": bool(residual <= tolerance)}
        )

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)


# --- helpers ---------------------------------------------------------------------

def settings_of(args):
    return {
        "theta_nodes": args.theta_nodes,
        "phi_nodes": args.phi_nodes,
        "mc_samples": args.mc_samples,
        "seed": args.seed,
    }


def envelope(args, payload):
    return {"version": __version__, "settings": settings_of(args), "payload": payload}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def dumps(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False)


def write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def fmt17(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return "%.17g" % x


def rows_to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt17(v) for v in row])
    return buf.getvalue()


def quadrature(args):
    return gauss_legendre_product(args.theta_nodes, args.phi_nodes)


def _delta(x):
    x = float(x)
    if not 0 <= x <= 1:
        raise argparse.ArgumentTypeError(f"delta must lie in [0, 1], got {x}")
    return x


# --- table -----------------------------------------------------------------------

def table_values(delta):
    return {
        "delta": delta,
        "f_single_rho": measures.fidelity_single_rho_opt().value,
        "f_single_tau": measures.fidelity_single_tau_opt(delta).value,
        "f_double_rho": measures.fidelity_double_rho().value,
        "f_double_tau_lb": measures.fidelity_double_tau_lb(delta).value,
    }


def cmd_table(args):
    v = table_values(args.delta)
    lines = [
        f"averaged fidelity at delta = {args.delta:g}",
        f"{'':14}{'single copy f':>16}{'two copies f_(x)':>20}",
        f"{'E_rho':14}{v['f_single_rho']:>16.6f}{v['f_double_rho']:>20.6f}",
        f"{'E_tau':14}{v['f_single_tau']:>16.6f}{v['f_double_tau_lb']:>20.6f}  (lower bound)",
        "",
    ]
    sys.stdout.write("\n".join(lines))
    payload = dict(v, labels={"f_double_tau_lb": "lower bound"})
    text = dumps(envelope(args, payload)) + "\n"
    if args.json:
        write_text(args.json, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- sweep -----------------------------------------------------------------------

def sweep_records(dmin, dmax, steps, q):
    chi_rho = measures.holevo_chi(rho_ensemble(), q).value
    mi_single_rho = measures.mi_single_closed_form(1.0)
    mi_double_rho = measures.mi_double_rho_closed_form(1.5, 1.0)
    out = []
    for delta in np.linspace(dmin, dmax, steps):
        delta = float(delta)
        v = measures.snqi_verdict(delta, evidence=False)
        out.append(
            SweepRecord(
                delta=delta,
                f_single_rho=v.f_single_rho,
                f_single_tau=v.f_single_tau,
                f_double_rho=v.f_double_rho,
                f_double_tau_lb=v.f_double_tau_lb,
                mi_single_rho=mi_single_rho,
                mi_single_tau=measures.mi_single_closed_form(1 - delta),
                mi_double_rho=mi_double_rho,
                mi_double_tau=measures.mi_double_tau(delta),
                chi_rho=chi_rho,
                chi_tau=measures.holevo_chi(tau_ensemble(delta), q).value,
                snqi=v.snqi,
            )
        )
    return out


def cmd_sweep(args):
    if not (0 <= args.min < args.max <= 1):
        raise UsageError("need 0 <= --min < --max <= 1")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    records = sweep_records(args.min, args.max, args.steps, quadrature(args))
    header = [f.name for f in fields(SweepRecord)]
    if args.format == "csv":
        text = rows_to_csv(header, [[getattr(r, h) for h in header] for r in records])
    else:
        text = dumps(envelope(args, {"records": [asdict(r) for r in records]})) + "\n"
    write_text(args.out, text)
    return EXIT_OK


# --- verify ----------------------------------------------------------------------

VERIFY_DELTAS = (0.0, 0.03, 0.5, 1.0)


def verify_morphisms(rep, rng, q):
    eff4 = [qmat.random_hermitian(4, rng) for _ in range(50)]
    eff2 = [qmat.random_hermitian(2, rng) for _ in range(50)]
    nodes = random_directions(20, rng)
    for d in VERIFY_DELTAS:
        lam = morphisms.lambda_delta(d)
        rep.add(f"lambda_identity[delta={d:g}]", morphisms.lambda_residual(lam, d, eff4, nodes), 1e-12)
        rep.add(f"j_identity[delta={d:g}]", morphisms.j_residual(morphisms.j_morphism(), d, eff2, nodes), 1e-12)
        rep.add(f"lambda_unital[delta={d:g}]", np.max(np.abs(lam(np.eye(4)) - np.eye(2))), 1e-12)
        rep.add(
            f"lambda_choi_min_closed_form[delta={d:g}]",
            abs(lam.choi_eigenvalues().min() - (-0.5 + 0.75 * d)), 1e-12,
        )
        if d < 2 / 3:
            rep.add(f"lambda_not_cp[delta={d:g}]", lam.choi_eigenvalues().min(), -1e-6)
    pr = morphisms.positivity_report(morphisms.lambda0())
    rep.add("lambda0_sampled_positive", -pr.min_output_eig, 1e-10)
    rep.add("transpose_choi_min", abs(morphisms.positivity_report(morphisms.transpose_map(), samples=512).choi_min_eig + 1), 1e-12)
    rep.add(
        "lambda_pair_witness[delta=0.03]",
        morphisms.doubled_output_min_eig(morphisms.lambda_delta(0.03), morphisms.entangled_witness()), -1e-6,
    )


def verify_povm(rep, rng, q):
    strat = strategies.tetra_two_copy_tau_povm()
    rep.add("tetra_completeness", strat.povm.completeness_error(), 1e-10)
    rep.add("tetra_psd", -strat.povm.min_eigenvalue(), 1e-10)
    for k in "+-":
        rep.add(f"parallel_gram[{k}]", strategies.solve_tetra_phases(k).residual, 1e-12)
        b = strategies.antiparallel_states(k)
        rep.add(f"antiparallel_gram[{k}]", np.max(np.abs(b.conj() @ b.T - np.eye(4))), 1e-10)
    a0, b0 = strategies.parallel_states("+")[0], strategies.antiparallel_states("+")[0]
    worst_a = worst_b = 0.0
    for _ in range(100):
        n = random_directions(1, rng)[0]
        d = float(rng.random())
        rp, rm = tau_state_pair(n, d)
        worst_a = max(worst_a, abs(np.vdot(a0, rp @ a0).real - strategies.density_parallel(n[2], d)))
        worst_b = max(worst_b, abs(np.vdot(b0, rm @ b0).real - strategies.density_antiparallel(n[2], d)))
    rep.add("parallel_density", worst_a, 1e-12)
    rep.add("antiparallel_density", worst_b, 1e-12)
    for s in (strategies.single_copy_covariant(0.4), strategies.single_copy_covariant(1.0, "tau"),
              strategies.two_copy_covariant(1.5, 1.0), strategies.two_copy_covariant(-0.3, -1.2)):
        avg = s.povm.orbit_average(q)
        rep.add(f"orbit_average[{s.label}]", np.max(np.abs(avg - np.eye(s.povm.dim))), 1e-8)


def tau_state_pair(n, delta):
    from .ensembles import rho_n_delta

    a, b = rho_n_delta(n, delta), rho_n_delta(-n, delta)
    return qmat.kron(a, a), qmat.kron(a, b)


def verify_measures(rep, rng, q):
    rho, rho2 = rho_ensemble(), two_copies(rho_ensemble())
    rep.add("f_single_rho", abs(measures.averaged_fidelity(rho, strategies.single_copy_covariant(1.0)).value - 2 / 3), 1e-8)
    for d in (0.0, 0.03, 0.5):
        tau = tau_ensemble(d)
        f = measures.averaged_fidelity(tau, strategies.single_copy_covariant(1.0, "tau")).value
        rep.add(f"f_single_tau[delta={d:g}]", abs(f - measures.fidelity_single_tau_opt(d).value), 1e-8)
        f2 = measures.averaged_fidelity(two_copies(tau), strategies.tetra_two_copy_tau_povm(), q).value
        rep.add(f"f_double_tau_lb[delta={d:g}]", abs(f2 - measures.fidelity_double_tau_lb(d).value), 1e-8)
        m2 = measures.mi_double_tau_reduced(d).value
        rep.add(f"mi_double_tau[delta={d:g}]", abs(m2 - measures.mi_double_tau_closed_form(d)), 1e-7)
        chi = measures.holevo_chi(tau, q).value
        rep.add(f"chi_tau[delta={d:g}]", abs(chi - measures.holevo_chi_tau_closed_form(d)), 1e-8)
    rep.add("f_double_rho", abs(measures.averaged_fidelity(rho2, strategies.two_copy_covariant(1.5, 1.0)).value - 0.75), 1e-8)
    rep.add("mi_single_rho", abs(measures.mutual_information(rho, strategies.single_copy_covariant(1.0)).value
                                 - measures.mi_single_closed_form(1.0)), 1e-7)
    for a, g in ((1.5, 1.0), (0.5, 0.0), (0.3, -1.0), (0.7, 0.9)):
        m = measures.mutual_information(rho2, strategies.two_copy_covariant(a, g)).value
        rep.add(f"mi_double_rho[{a:g},{g:g}]", abs(m - measures.mi_double_rho_closed_form(a, g)), 1e-7)
    rep.add("chi_rho", abs(measures.holevo_chi(rho, q).value - 1), 1e-8)
    rep.add("fidelity_crossover", abs(measures.fidelity_crossover() - (7 - 4 * np.sqrt(3))), 1e-9)
    rep.add("mi_crossover", abs(measures.mi_crossover() - 0.0575), 2e-3)


def verify_classical(rep, rng, q):
    worst, ok = 0.0, 0
    for _ in range(50):
        t, r, _m = classical.random_simulable_pair(rng)
        res = classical.classical_ensemble_map(t, r)
        worst = max(worst, res.residual)
        ok += res.feasible and classical.classical_quantitativity_check(res, t, r)
    rep.add("classical_map_residual", worst, 1e-9)
    rep.add("classical_doubled_failures", 50 - ok, 0)
    rep.add(
        "quantum_pair_witness[delta=0.03]",
        morphisms.doubled_output_min_eig(morphisms.lambda_delta(0.03), morphisms.entangled_witness()), -1e-6,
    )


SUITES = {
    "morphisms": verify_morphisms,
    "povm": verify_povm,
    "measures": verify_measures,
    "classical": verify_classical,
}


def run_suite(name, seed, q):
    rep = VerifyReport(name, seed, [])
    SUITES[name](rep, np.random.default_rng(seed), q)
    return rep


def monte_carlo_check(rep, samples, seed):
    """Seeded Monte-Carlo estimate of the single-copy flagged fidelity at delta = 0.03."""
    s = strategies.single_copy_covariant(1.0, "tau")
    tau = tau_ensemble(0.03)
    mc = monte_carlo(samples, seed)
    est, err = integrate_with_error(
        mc, lambda n: np.einsum("kij,ji->k", tau.state(n), s.povm.seed).real * (1 + n[:, 2]) / 2,
        batched=True,
    )
    rep.add("f_single_tau_monte_carlo[3 sigma]", abs(est - measures.fidelity_single_tau_opt(0.03).value) - 3 * err, 0.0)


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    q = quadrature(args)
    reports = [run_suite(n, args.seed, q) for n in names]
    if "measures" in names:
        monte_carlo_check(reports[names.index("measures")], args.mc_samples, args.seed)
    for rep in reports:
        for c in rep.checks:
            log.info("%s %s residual=%.3g tol=%g", "PASS" if c["pass"] else "FAIL", c["name"], c["residual"], c["tolerance"])
    payload = {"reports": [asdict(r) for r in reports], "pass": all(r.passed for r in reports)}
    write_text(args.out, dumps(envelope(args, payload)) + "\n")
    return EXIT_OK if payload["pass"] else EXIT_FAIL


# --- figure ------------------------------------------------------------------------

def figure_fig3(points=101):
    mi_rho1 = measures.mi_single_closed_form(1.0)
    mi_rho2 = measures.mi_double_rho_closed_form(1.5, 1.0)
    rows = []
    for d in np.linspace(0, 1, points):
        rows.append([d, mi_rho1, measures.mi_single_closed_form(1 - d), mi_rho2, measures.mi_double_tau(d)])
    return ["delta", "mi_single_rho", "mi_single_tau", "mi_double_rho", "mi_double_tau"], rows


def figure_fig5(points=201):
    return ["r", "mi"], [[r, measures.mi_single_closed_form(r)] for r in np.linspace(-1, 1, points)]


def figure_fig6(step=0.05):
    rows = []
    for g in np.round(np.arange(-2.0, 1.0 + step / 2, step), 12):
        top = g / 2 + 1
        for a in np.round(np.arange(-top, top + step / 2, step), 12):
            a = min(max(a, -top), top)
            rows.append([a, g, measures.mi_double_rho_closed_form(a, g)])
    return ["alpha", "gamma", "mi"], rows


FIGURES = {"fig3": figure_fig3, "fig5": figure_fig5, "fig6": figure_fig6}


def cmd_figure(args):
    header, rows = FIGURES[args.which]()
    if args.out and args.out.endswith(".json"):
        text = dumps(envelope(args, {"figure": args.which, "columns": header, "rows": rows})) + "\n"
    else:
        text = rows_to_csv(header, rows)
    write_text(args.out, text)
    return EXIT_OK


# --- choi / povm ------------------------------------------------------------------

def cmd_choi(args):
    lam = morphisms.lambda_delta(args.delta)
    ev = lam.choi_eigenvalues()
    payload = {
        "label": lam.label,
        "delta": args.delta,
        "eigenvalues": ev[::-1].tolist(),
        "is_cp": bool(ev.min() >= -morphisms.CP_TOL),
    }
    write_text(args.out, dumps(envelope(args, payload)) + "\n")
    return EXIT_OK


def _complex_matrix(m):
    return {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}


def cmd_povm(args):
    strat = strategies.tetra_two_copy_tau_povm()
    phases = {k: strategies.solve_tetra_phases(k) for k in "+-"}
    payload = {
        "label": strat.label,
        "ordering": "H H H' H'",
        "guesses": strat.guesses.tolist(),
        "effects": [_complex_matrix(e) for e in strat.povm.effects],
        "diagnostics": {
            "completeness_error": strat.povm.completeness_error(),
            "min_eigenvalue": strat.povm.min_eigenvalue(),
            "phases": {k: {"values": p.phases.tolist(), "gram_residual": p.residual,
                           "single_phase_feasible": p.single_phase_feasible}
                       for k, p in phases.items()},
        },
    }
    write_text(args.dump, dumps(envelope(args, payload)) + "\n")
    return EXIT_OK


# --- parser -------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="snqi", description="Spin-carrier information toolkit.")
    p.add_argument("--theta-nodes", type=int, default=DEFAULT_THETA_NODES)
    p.add_argument("--phi-nodes", type=int, default=DEFAULT_PHI_NODES)
    p.add_argument("--mc-samples", type=int, default=DEFAULT_MC_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="averaged fidelity table at one delta")
    t.add_argument("--delta", type=_delta, default=0.0)
    t.add_argument("--json", help="write the JSON report here instead of stdout")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("sweep", help="all measures over a delta grid")
    s.add_argument("--min", type=float, default=0.0)
    s.add_argument("--max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=101)
    s.add_argument("--out", default="-")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    v.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="same as the global --seed")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figure", help="figure data as CSV (or JSON for *.json)")
    f.add_argument("--which", choices=tuple(FIGURES), required=True)
    f.add_argument("--out", default="-")
    f.set_defaults(func=cmd_figure)

    c = sub.add_parser("choi", help="Choi spectrum of the statistical morphism")
    c.add_argument("--delta", type=_delta, default=0.0)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_choi)

    m = sub.add_parser("povm", help="dump the tetrahedral two-copy POVM")
    m.add_argument("--dump", default="-")
    m.set_defaults(func=cmd_povm)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, SnqiError) as exc:
        print(f"snqi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

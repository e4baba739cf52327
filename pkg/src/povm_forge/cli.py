"""Command-line front end.

Exit status: 0 all checks pass, 1 a check failed, 2 invalid parameters,
3 resolution or resource limits, 4 widths outside the positivity regime.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import contvar as cv
from .circuits import (
    QuditRegister,
    cyclic_dense_circuit,
    cyclic_gate_circuit,
    cyclic_unitary,
    gamma_state,
    hw_circuit,
    hw_kraus_from_circuit,
    run_measurement,
)
from .errors import PovmForgeError, ResolutionError, ResourceError
from .povm import (
    KrausFamily,
    check_completeness,
    check_minimal_disturbance,
    cyclic_povm,
    hw_povm,
    kraus_operators,
    random_seed_operator,
)
from .report import CheckReport
from .verify import run_suite

EXIT_OK, EXIT_CHECK, EXIT_PARAM, EXIT_RESOURCE, EXIT_REGIME = 0, 1, 2, 3, 4
THREADS_ENV = "POVM_FORGE_THREADS"


class ParameterError(PovmForgeError):
    pass


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {n}")
    return n


def parallel_map(fn, items) -> list:
    """Order-preserving map; tasks are independent so results do not depend on scheduling."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- output helpers ------------------------------------------------------------


def _write_report(out: Path, command: str, config: dict, checks: list, extra: dict | None = None) -> dict:
    doc = {
        "schema": 1,
        "command": command,
        "config": config,
        "pass": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
    if extra:
        doc.update(extra)
    path = out / "report.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return doc


def _status(checks) -> int:
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def _print_checks(checks) -> None:
    for c in checks:
        print(c.line())


def _random_state(rng, d) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def _born_check(name, probs, born, tol=1e-10) -> CheckReport:
    err = float(np.abs(np.asarray(probs) - np.asarray(born)).max())
    return CheckReport(name, err, tol, err < tol)


# -- discrete commands -----------------------------------------------------------


def cmd_discrete_cyclic(args, config) -> int:
    n = config["n"]
    if n < 2:
        raise ParameterError(f"--n must be >= 2, got {n}")
    out = _outdir(args)
    rng = np.random.default_rng(config["seed"])
    povm = cyclic_povm(n)
    kraus = kraus_operators(cyclic_unitary(n), np.eye(n)[0], 2, n)
    checks = [check_minimal_disturbance(kraus, povm), check_completeness(povm.operators)]

    m = int(round(math.log2(n)))
    gate_level = 2**m == n
    circuit = cyclic_gate_circuit(m) if gate_level else cyclic_dense_circuit(n)
    circuit.dump(out / "circuit.json")

    psi = _random_state(rng, 2)
    anc_dims = (2,) * m if gate_level else (n,)
    reg = QuditRegister(anc_dims, np.eye(n)[0]).kron(QuditRegister((2,), psi))
    res = run_measurement(circuit, reg, seed=config["seed"], shots=config["shots"])
    # flatten ancilla labels to the outcome index j (first wire most significant)
    idx = [int(np.ravel_multi_index(lab, anc_dims)) for lab in res.labels]
    checks.append(_born_check("outcome_distribution", res.probabilities, povm.probabilities(psi)[idx]))
    res.write_csv(out / "outcomes.csv")
    _write_report(out, "discrete-cyclic", config, checks, {"files": ["circuit.json", "outcomes.csv"]})
    _print_checks(checks)
    return _status(checks)


def cmd_discrete_hw(args, config) -> int:
    d = config["d"]
    if d < 2:
        raise ParameterError(f"--d must be >= 2, got {d}")
    out = _outdir(args)
    rng = np.random.default_rng(config["seed"])
    if config["mu"] == "random":
        mu = random_seed_operator(d, rng)
    elif config["mu"] == "pure":
        v = _random_state(rng, d)
        mu = np.outer(v, v.conj()) / d  # rank one with trace 1/d
    else:
        raise ParameterError(f"--mu must be 'random' or 'pure', got {config['mu']!r}")
    povm = hw_povm(d, mu)
    kraus = KrausFamily(tuple(hw_kraus_from_circuit(d, mu)), povm.labels)
    checks = [check_minimal_disturbance(kraus, povm), check_completeness(povm.operators)]
    circuit = hw_circuit(d)
    circuit.dump(out / "circuit.json")
    psi = _random_state(rng, d)
    res = run_measurement(circuit, gamma_state(mu, d).kron(QuditRegister((d,), psi)), config["seed"], config["shots"])
    born = [povm.probabilities(psi)[povm.index(tuple(lab))] for lab in res.labels]
    checks.append(_born_check("outcome_distribution", res.probabilities, born))
    res.write_csv(out / "outcomes.csv")
    _write_report(out, "discrete-hw", config, checks, {"files": ["circuit.json", "outcomes.csv"]})
    _print_checks(checks)
    return _status(checks)


# -- continuous commands ---------------------------------------------------------


def _grid(config) -> cv.Grid1D:
    return cv.Grid1D(float(config["half_width"]), int(config["points"]))


def _write_density_csv(path: Path, rows) -> None:
    with path.open("w") as fh:
        fh.write("t,s,probability_density\n")
        for t, s, p in rows:
            fh.write(f"{t:.12g},{s:.12g},{p:.12g}\n")


def cmd_cv_circuit(args, config) -> int:
    out = _outdir(args)
    grid = _grid(config)
    alpha = cv.gaussian_wavefn(float(config["sigma1"]), grid)
    lattice = cv.outcome_lattice(float(config["lattice_extent"]), int(config["lattice_steps"]))
    rng = np.random.default_rng(config["seed"])
    psis = [cv.random_smooth_wavefn(grid, rng) for _ in range(config["samples"])]
    reports = parallel_map(lambda psi: cv.check_circuit_vs_oracle(alpha, psi, lattice), psis)
    worst = max(r.max_error for r in reports)
    checks = [CheckReport("cv_circuit_vs_coin_oracle", worst, 1e-3, worst < 1e-3,
                          {"samples": len(psis), "outcomes": len(lattice),
                           "max_snap_distance": max(r.details["max_snap_distance"] for r in reports)})]
    # density of the first sample over the lattice: ||Psi_{t,s}||^2
    states = cv.infhw_lattice(alpha, psis[0], lattice)
    _write_density_csv(out / "density.csv", [(t, s, st.norm**2) for (t, s), st in zip(lattice, states)])
    _write_report(out, "cv-circuit", config, checks, {"files": ["density.csv"]})
    _print_checks(checks)
    return _status(checks)


def cmd_cv_scatter(args, config) -> int:
    s1, s2 = float(config["sigma1"]), float(config["sigma2"])
    if not (s1 > 0 and s2 > 0):
        raise ParameterError("--sigma1 and --sigma2 must be positive")
    out = _outdir(args)
    grid = _grid(config)
    alpha, beta = cv.gaussian_wavefn(s1, grid), cv.gaussian_wavefn(s2, grid)
    regime = cv.in_positivity_regime(s1, s2)
    tp = cv.thermal_params(s1, s2)
    checks = [cv.k00_positivity(alpha, beta, s1, s2)]
    rng = np.random.default_rng(config["seed"])
    pts = [tuple(float(v) for v in rng.uniform(-1, 1, size=2)) for _ in range(5)]
    checks.append(cv.check_kernel_covariance(alpha, beta, pts))
    mu_rep = cv.mu_consistency(alpha, beta, s1, s2)
    checks.append(mu_rep)
    psi = cv.gaussian_wavefn(min(max(1.0 / math.sqrt(tp.m_omega), 4 * grid.spacing), grid.half_width / 4), grid)
    stats = cv.outcome_statistics(alpha, beta, psi, s1, s2)
    if regime:
        mu = cv.mu_operator(alpha, beta)
        if tp.N == 0.0:
            fid = cv.gaussian_fidelity_to_ground(mu, tp.m_omega, grid)
            checks.append(CheckReport("ground_state_fidelity", 1 - fid, 1e-3, fid > 0.999, {"fidelity": fid}))
        else:
            rho = cv.thermal_state(tp, 40, grid)
            dist = cv.trace_distance(mu / np.trace(mu).real, rho.matrix)
            checks.append(CheckReport("thermal_state_match", dist, 5e-3, dist < 5e-3))
    stats.write_csv(out / "density.csv", stride=max(1, grid.points // 128))
    with (out / "thermal.csv").open("w") as fh:
        fh.write("sigma1,sigma2,m_omega,N,purity,positivity_regime\n")
        fh.write(f"{s1:.12g},{s2:.12g},{tp.m_omega:.12g},{tp.N:.12g},{mu_rep.details['purity']:.12g},{str(regime).lower()}\n")
    summary = {
        "thermal": {"m_omega": tp.m_omega, "N": tp.N, "purity": mu_rep.details["purity"]},
        "uncertainty": {"delta_x": stats.delta_x, "delta_p": stats.delta_p, "product": stats.product},
        "positivity_regime": regime,
        "files": ["density.csv", "thermal.csv"],
    }
    _write_report(out, "cv-scatter", config, checks, summary)
    _print_checks(checks)
    print(f"m_omega={tp.m_omega:.6g} N={tp.N:.6g} purity={mu_rep.details['purity']:.6g} "
          f"dx*dp={stats.product:.6g}")
    if not regime:
        print(f"warning: sigma1={s1} < 2*sigma2={2 * s2}; K_00 is outside the positivity regime",
              file=sys.stderr)
        return EXIT_REGIME
    return _status(checks)


def cmd_cv_optics(args, config) -> int:
    out = _outdir(args)
    grid = _grid(config)
    alpha = cv.gaussian_wavefn(float(config["sigma1"]), grid)
    beta = cv.gaussian_wavefn(float(config["sigma2"]), grid)
    lattice = cv.outcome_lattice(float(config["lattice_extent"]), int(config["lattice_steps"]))
    rng = np.random.default_rng(config["seed"])
    psi = cv.random_smooth_wavefn(grid, rng)
    checks = [cv.check_optics(alpha, beta, psi, lattice)]
    states = cv.optics_lattice(alpha, beta, psi, lattice)
    _write_density_csv(out / "density.csv", [(x, y, st.norm**2) for (x, y), st in zip(lattice, states)])
    _write_report(out, "cv-optics", config, checks, {"files": ["density.csv"]})
    _print_checks(checks)
    return _status(checks)


def cmd_verify_all(args, config) -> int:
    out = _outdir(args)
    result = run_suite(config["seed"], config["inject_perturbation"],
                       log=lambda line: print(line, file=sys.stderr))
    doc = result.to_dict(config)
    (out / "report.json").write_text(json.dumps(doc, indent=2) + "\n")
    for r in result.reports:
        print(r.line())
    if not result.passed:
        print("failed: " + ", ".join(doc["failures"]), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


DEFAULTS = {
    "discrete-cyclic": {"n": 8, "shots": 0, "seed": 0},
    "discrete-hw": {"d": 3, "mu": "random", "shots": 0, "seed": 0},
    "cv-circuit": {"half_width": 10.0, "points": 256, "sigma1": 1.0, "lattice_extent": 2.0,
                   "lattice_steps": 5, "samples": 3, "seed": 0},
    "cv-scatter": {"half_width": None, "points": 256, "sigma1": 2.0, "sigma2": 1.0, "seed": 0},
    "cv-optics": {"half_width": 10.0, "points": 256, "sigma1": 1.0, "sigma2": 1.5, "lattice_extent": 1.0,
                  "lattice_steps": 3, "seed": 0},
    "verify-all": {"seed": 0, "inject_perturbation": False},
}

COMMANDS = {
    "discrete-cyclic": cmd_discrete_cyclic,
    "discrete-hw": cmd_discrete_hw,
    "cv-circuit": cmd_cv_circuit,
    "cv-scatter": cmd_cv_scatter,
    "cv-optics": cmd_cv_optics,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="povm-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", default="povm_forge_out", help="output directory")
        sp.add_argument("--config", help="JSON file with parameter overrides")

    def grid_flags(sp, lattice=True):
        sp.add_argument("--points", type=int)
        sp.add_argument("--half-width", dest="half_width", type=float)
        if lattice:
            sp.add_argument("--lattice", dest="lattice_steps", type=int, help="outcome lattice steps per axis")
            sp.add_argument("--lattice-extent", dest="lattice_extent", type=float)

    sp = sub.add_parser("discrete-cyclic", help="cyclic qubit POVM dilation")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--shots", type=int)

    sp = sub.add_parser("discrete-hw", help="Heisenberg-Weyl qudit POVM circuit")
    common(sp)
    sp.add_argument("--d", type=int)
    sp.add_argument("--mu", choices=("random", "pure"))
    sp.add_argument("--shots", type=int)

    sp = sub.add_parser("cv-circuit", help="continuous Heisenberg-Weyl circuit against its oracle")
    common(sp)
    grid_flags(sp)
    sp.add_argument("--sigma1", type=float, help="width of the ancilla Gaussian")
    sp.add_argument("--samples", type=int)

    sp = sub.add_parser("cv-scatter", help="scattering kernel, thermal map and uncertainty product")
    common(sp)
    grid_flags(sp, lattice=False)
    sp.add_argument("--sigma1", type=float)
    sp.add_argument("--sigma2", type=float)

    sp = sub.add_parser("cv-optics", help="beam-splitter scheme against its oracle")
    common(sp)
    grid_flags(sp)
    sp.add_argument("--sigma1", type=float)
    sp.add_argument("--sigma2", type=float)

    sp = sub.add_parser("verify-all", help="run the full verification suite")
    common(sp)
    sp.add_argument("--inject-perturbation", dest="inject_perturbation", action="store_true", default=None,
                    help="test hook: scale one POVM element by 1.01")
    return p


def resolve_config(args) -> dict:
    config = dict(DEFAULTS[args.command])
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(overrides) - set(config)
        if unknown:
            raise ParameterError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        config.update(overrides)
    for key in config:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if "half_width" in config and config["half_width"] is None:
        # wide enough that sigma <= L/4 holds for both ancillas
        config["half_width"] = max(10.0, 4.0 * float(config["sigma1"]), 4.0 * float(config.get("sigma2", 0)))
    if "points" in config and (config["points"] < 8 or config["points"] % 2):
        raise ParameterError(f"--points must be an even number >= 8, got {config['points']}")
    for key in ("shots", "samples", "lattice_steps"):
        if key in config and config[key] < (0 if key == "shots" else 1):
            raise ParameterError(f"--{key} out of range: {config[key]}")
    config["threads"] = worker_count()
    return config


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config)
    except (ResolutionError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PovmForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())

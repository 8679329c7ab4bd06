"""Command-line front end for the simulation and certification pipeline.

All angles are radians; times and rates are in the dimensionless units set
by eta*omega_bar unless a preset supplies physical values.  Every output
file begins with a provenance header (tool version, effective configuration,
seed).  Exit codes: 0 success, 1 usage, 2 violated physics precondition,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, certification, evolution, measurement, model, observables, repro
from .dark_state import dark_coefficients
from .errors import NumericalError, PhysicsConfigError

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS, EXIT_NUMERICAL = 0, 1, 2, 3

DEFAULT_SEED = 12345


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _provenance(subcommand: str, config: dict) -> list[str]:
    lines = [f"# dickesim {__version__}", f"# subcommand: {subcommand}"]
    lines += [f"# {key} = {value}" for key, value in config.items()]
    return lines


def format_csv(header_lines, column_names, rows) -> str:
    text_lines = list(header_lines)
    text_lines.append(",".join(column_names))
    for row in rows:
        text_lines.append(",".join(str(v) for v in row))
    return "\n".join(text_lines) + "\n"


def _emit(path, header_lines, column_names, rows):
    text = format_csv(header_lines, column_names, rows)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _print_summary(pairs: dict, path=None) -> None:
    lines = [f"{key} = {value}" for key, value in pairs.items()]
    for line in lines:
        print(line)
    if path is not None:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _parse_keyvalue(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed line in {path!r}: {raw.rstrip()}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_SUBPARSERS: dict = {}


def _apply_config_file(ns, argv) -> None:
    """Fill flags from a key-value config file; explicit flags win."""
    if getattr(ns, "config", None) is None:
        return
    values = _parse_keyvalue(ns.config)
    consumed = set()
    for action in _SUBPARSERS[ns.subcommand]._actions:
        if action.dest not in values:
            continue
        consumed.add(action.dest)
        if any(opt in argv for opt in action.option_strings):
            continue  # flags override file values
        raw = values[action.dest]
        value = action.type(raw) if action.type is not None else raw
        if action.choices is not None and value not in action.choices:
            raise ValueError(
                f"config key {action.dest!r}: {value!r} not in {tuple(action.choices)}"
            )
        setattr(ns, action.dest, value)
    unknown = set(values) - consumed
    if unknown:
        raise ValueError(f"config file has unknown keys: {', '.join(sorted(unknown))}")


def _build_run(ns):
    """(schedule, params) from either a preset or explicit dimensionless flags."""
    if ns.adiabatic_preset is not None:
        return evolution.adiabatic_preset(ns.adiabatic_preset, ns.n)
    schedule = evolution.PulseSchedule(
        total_time=ns.eta_omega_t, omega_bar=1.0, shape=ns.schedule
    )
    params = model.SystemParams(n_ions=ns.n, eta=1.0, delta=ns.delta_ratio)
    return schedule, params


def _spin_marginal(traj: evolution.Trajectory, index: int) -> np.ndarray:
    state = traj.states[index]
    if traj.model_tag == "full":
        return observables.spin_density_from_full(state, traj.n_ions, traj.params.n_max)
    return observables.spin_density_from_chain(state)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_darkstate(ns) -> int:
    if ns.theta is not None:
        omega_r = 1 + np.cos(ns.theta)
        omega_b = 1 - np.cos(ns.theta)
    else:
        omega_r, omega_b = ns.omega_r, ns.omega_b
    state = dark_coefficients(ns.n, omega_r, omega_b)
    header = _provenance("darkstate", {
        "n": ns.n, "theta": ns.theta, "omega_r": omega_r, "omega_b": omega_b,
        "norm_a": state.norm_a, "seed": "none",
    })
    rows = [(2 * i, amp) for i, amp in enumerate(state.amplitudes)]
    _emit(ns.output, header, ("excitation", "amplitude"), rows)
    return EXIT_OK


def cmd_evolve(ns) -> int:
    schedule, params = _build_run(ns)
    if ns.model == "reduced":
        traj = evolution.integrate_reduced(schedule, params, dt=ns.dt)
    else:
        traj = evolution.integrate_full(schedule, params, dt=ns.dt)
    dark_fid = evolution.dark_fidelity_series(traj)
    jz = np.arange(ns.n + 1) - ns.n / 2

    rows = []
    for i, t in enumerate(traj.times):
        rho = _spin_marginal(traj, i)
        mom = observables.spin_moments(rho)
        rows.append((t, float(np.sum(jz * np.real(np.diag(rho)))),
                     mom.var_jx, mom.var_jy, mom.var_jz, dark_fid[i]))

    header = _provenance("evolve", {
        "n": ns.n, "model": ns.model, "schedule": schedule.shape,
        "preset": ns.adiabatic_preset, "total_time": schedule.total_time,
        "omega_bar": schedule.omega_bar, "delta": params.delta,
        "eta_omega_bar_T": schedule.adiabaticity(params.eta),
        "dt": ns.dt, "seed": "none",
    })
    _emit(ns.output, header, ("t", "jz_mean", "var_jx", "var_jy", "var_jz", "dark_fidelity"),
          rows)
    _print_summary({
        "final_jz": rows[-1][1],
        "midpoint_dark_fidelity": dark_fid[traj.index_of(schedule.total_time / 2)],
        "eta_omega_bar_T": schedule.adiabaticity(params.eta),
        "max_norm_drift": traj.max_norm_drift,
        "truncation_leak": traj.truncation_leak,
    }, path=ns.summary)
    if traj.truncation_leak > evolution.LEAK_WARN_LEVEL:
        raise NumericalError(f"phonon truncation leak {traj.truncation_leak:.2e}")
    return EXIT_OK


def cmd_scan_noise(ns) -> int:
    schedule, params = _build_run(ns)
    cut_times = np.linspace(0.0, schedule.total_time, ns.cuts)
    states = evolution.truncated_scan(schedule, params, list(cut_times), model=ns.model)
    rows = []
    for tau, state in states:
        if ns.model == "full":
            rho = observables.spin_density_from_full(state, ns.n, params.n_max)
        else:
            rho = observables.spin_density_from_chain(state)
        mom = observables.spin_moments(rho)
        rows.append((tau, mom.var_jx, mom.var_jy, mom.var_jz))
    header = _provenance("scan-noise", {
        "n": ns.n, "model": ns.model, "preset": ns.adiabatic_preset,
        "total_time": schedule.total_time, "delta": params.delta,
        "cuts": ns.cuts, "seed": "none",
    })
    _emit(ns.output, header, ("tau_c", "var_jx", "var_jy", "var_jz"), rows)
    return EXIT_OK


def cmd_parity(ns) -> int:
    if ns.n != 2:
        raise PhysicsConfigError("parity oscillation analysis is a two-ion protocol")
    if ns.source == "ideal":
        state = dark_coefficients(2, 1.0, 1.0).spin_vector.astype(complex)
    else:
        traj = repro.strict_trajectory(2)
        state = observables.spin_density_from_chain(traj.midpoint_state())
    phases = np.linspace(0.0, 2 * np.pi, ns.phases, endpoint=False)
    scan = observables.parity_scan(state, phases)

    if ns.shots is not None:
        config = measurement.ShotConfig(n_shots=ns.shots, seed=ns.seed)
        parities = _sample_parity_curve(state, phases, config)
        fit = observables.fit_parity_curve(phases, parities)
        pop = measurement.sample_populations(state, config.substream(10_000), "z")
        p_lower, p_upper = pop.frequencies[0], pop.frequencies[-1]
        fidelity = observables.parity_fidelity(p_lower, p_upper, fit.amplitude)
        amplitude = fit.amplitude
    else:
        parities = scan.parities
        amplitude, p_lower, p_upper, fidelity = (
            scan.amplitude, scan.p_lower, scan.p_upper, scan.fidelity
        )

    header = _provenance("parity", {
        "n": 2, "source": ns.source, "phases": ns.phases,
        "shots": ns.shots, "generator": measurement.GENERATOR_NAME,
        "seed": ns.seed if ns.shots is not None else "none",
    })
    _emit(ns.output, header, ("phi", "parity"), list(zip(phases, parities)))
    _print_summary({
        "amplitude": amplitude, "p_lower": p_lower, "p_upper": p_upper,
        "fidelity": fidelity,
    }, path=ns.summary)
    return EXIT_OK


def _sample_parity_curve(state, phases, config: measurement.ShotConfig) -> np.ndarray:
    from scipy.linalg import expm

    from .spin_algebra import full_space_oracle, symmetric_isometry

    jx = full_space_oracle(2, "jx").matrix
    jy = full_space_oracle(2, "jy").matrix
    state = np.asarray(state, dtype=complex)
    if state.shape[0] == 3:
        iso = symmetric_isometry(2)
        state = iso @ state @ iso.conj().T if state.ndim == 2 else iso @ state
    parity_sign = np.array([(-1.0) ** (2 - bin(k).count("1")) for k in range(4)])
    out = np.empty(len(phases))
    for k, phi in enumerate(phases):
        pulse = expm(-1j * (np.pi / 2) * (np.cos(phi) * jx + np.sin(phi) * jy))
        if state.ndim == 1:
            probs = np.abs(pulse @ state) ** 2
        else:
            probs = np.real(np.diag(pulse @ state @ pulse.conj().T))
        p_plus = float(np.sum(probs[parity_sign > 0]) / np.sum(probs))
        draws = config.substream(100 + k).generator().binomial(config.n_shots, p_plus)
        out[k] = 2 * draws / config.n_shots - 1
    return out


def cmd_witness(ns) -> int:
    if ns.source == "ideal":
        from .spin_algebra import half_excited_x
        state = half_excited_x(ns.n)
    else:
        traj = repro.strict_trajectory(ns.n)
        state = observables.spin_density_from_chain(traj.midpoint_state())
    rows = []
    for axes in (("y", "z"), ("z", "x"), ("x", "y")):
        value = observables.witness(state, axes)
        verdict = observables.witness_verdict(ns.n, value)
        rows.append(("".join(axes), value, observables.WITNESS_THRESHOLD_FOUR_ION, verdict))
    header = _provenance("witness", {
        "n": ns.n, "source": ns.source, "seed": "none",
    })
    _emit(ns.output, header, ("axes", "value", "threshold", "genuine_multipartite"), rows)
    return EXIT_OK


def cmd_bounds(ns) -> int:
    raw = _parse_keyvalue(ns.input)
    required = ("W", "sigma_W", "p_list", "sigma_list", "j_M")
    missing = [key for key in required if key not in raw]
    if missing:
        raise ValueError(f"input file is missing keys: {', '.join(missing)}")
    witness_value = float(raw["W"])
    sigma_w = float(raw["sigma_W"])
    pops = [float(tok) for tok in raw["p_list"].split(",")]
    sigmas = [float(tok) for tok in raw["sigma_list"].split(",")]
    j_max = int(raw["j_M"])

    lower = certification.fidelity_lower(witness_value, pops, j_max)
    upper = certification.fidelity_upper(pops)
    sigma_lower, sigma_upper = certification.propagate_uncertainty(j_max, sigma_w, sigmas)

    header = _provenance("bounds", {"input": ns.input, "seed": "none"})
    echo_rows = [(key, f"\"{raw[key]}\"") for key in required]
    result_rows = [
        ("F_lo", lower), ("sigma_lo", sigma_lower),
        ("F_hi", upper), ("sigma_hi", sigma_upper),
        ("ghz_excluded", certification.ghz_excluded(lower)),
    ]
    _emit(ns.output, header + ["# input echo below"], ("key", "value"),
          echo_rows + result_rows)
    _print_summary({
        "F_lo": f"{lower:.6f} +- {sigma_lower:.6f}",
        "F_hi": f"{upper:.6f} +- {sigma_upper:.6f}",
        "ghz_excluded": certification.ghz_excluded(lower),
        "verdict": "half-excited Dicke state certified"
        if certification.ghz_excluded(lower) else "lower bound does not exclude GHZ",
    }, path=ns.summary)
    return EXIT_OK


def cmd_sweep(ns) -> int:
    times = [float(tok) for tok in ns.eta_omega_t_list.split(",")]

    def one(total_time: float):
        schedule = evolution.PulseSchedule(total_time=total_time, omega_bar=1.0,
                                           shape=ns.schedule)
        params = model.SystemParams(n_ions=ns.n, eta=1.0, delta=ns.delta_ratio)
        traj = evolution.integrate_reduced(schedule, params)
        jz = np.arange(ns.n + 1) - ns.n / 2
        final_jz = float(np.sum(jz * np.abs(traj.final_state()) ** 2))
        mid_fid = evolution.dark_fidelity_series(traj)[traj.index_of(total_time / 2)]
        return total_time, final_jz, mid_fid

    if ns.workers > 1:
        with ThreadPoolExecutor(max_workers=ns.workers) as pool:
            rows = list(pool.map(one, times))
    else:
        rows = [one(t) for t in times]
    header = _provenance("sweep", {
        "n": ns.n, "schedule": ns.schedule, "delta_ratio": ns.delta_ratio,
        "eta_omega_t_list": ns.eta_omega_t_list, "workers": ns.workers, "seed": "none",
    })
    _emit(ns.output, header, ("eta_omega_t", "final_jz", "midpoint_dark_fidelity"), rows)
    return EXIT_OK


def cmd_repro(ns) -> int:
    results = repro.run_all()
    width = max(len(r.description) for r in results)
    ok = True
    for r in results:
        print(f"criterion {r.cid:>3}  {r.description:<{width}}  {r.verdict}")
        for line in r.details:
            print(f"      {line}")
        if r.documented_shortfall:
            continue  # expected to fail; see notes shipped with the repository
        ok = ok and r.passed
    return EXIT_OK if ok else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dickesim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dickesim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_parser(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", default=None,
                       help="key-value file supplying flag defaults (flags win)")
        _SUBPARSERS[name] = p
        return p

    def add_run_flags(p):
        p.add_argument("--n", type=int, default=4, help="number of ions")
        p.add_argument("--model", choices=("reduced", "full"), default="reduced")
        p.add_argument("--schedule", choices=evolution.SCHEDULE_SHAPES, default="linear")
        p.add_argument("--eta-omega-t", type=float, default=40.0,
                       help="dimensionless ramp length eta*omega_bar*T")
        p.add_argument("--delta-ratio", type=float, default=20.0,
                       help="detuning over eta*omega_bar")
        p.add_argument("--adiabatic-preset", choices=evolution.PRESET_NAMES, default=None,
                       help="overrides the explicit ramp flags")
        p.add_argument("--dt", type=float, default=None, help="integrator step")
        p.add_argument("--output", default=None, help="CSV path (default stdout)")
        p.add_argument("--summary", default=None, help="key-value summary file")

    p = add_parser("darkstate", help="closed-form dark-state amplitudes")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--theta", type=float, default=None,
                   help="ramp angle in radians; sets omega_r/b = 1 +- cos(theta)")
    p.add_argument("--omega-r", type=float, default=1.0)
    p.add_argument("--omega-b", type=float, default=1.0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_darkstate)

    p = add_parser("evolve", help="integrate a STIRAP ramp")
    add_run_flags(p)
    p.set_defaults(func=cmd_evolve)

    p = add_parser("scan-noise", help="spin noise versus pulse truncation time")
    add_run_flags(p)
    p.add_argument("--cuts", type=int, default=41, help="number of truncation times")
    p.set_defaults(func=cmd_scan_noise)

    p = add_parser("parity", help="two-ion parity oscillation and fidelity")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--source", choices=("ideal", "simulated"), default="ideal")
    p.add_argument("--phases", type=int, default=40, help="analysis phases over 2*pi")
    p.add_argument("--shots", type=int, default=None, help="shots per phase (default exact)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", default=None)
    p.add_argument("--summary", default=None, help="key-value summary file")
    p.set_defaults(func=cmd_parity)

    p = add_parser("witness", help="two-axis squared-spin witness values")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--source", choices=("ideal", "simulated"), default="ideal")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_witness)

    p = add_parser("bounds", help="fidelity bounds from measured witness + populations")
    p.add_argument("--input", required=True,
                   help="key-value file with W, sigma_W, p_list, sigma_list, j_M")
    p.add_argument("--output", default=None)
    p.add_argument("--summary", default=None, help="key-value summary file")
    p.set_defaults(func=cmd_bounds)

    p = add_parser("sweep", help="transfer quality over a list of ramp lengths")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--schedule", choices=evolution.SCHEDULE_SHAPES, default="linear")
    p.add_argument("--delta-ratio", type=float, default=20.0)
    p.add_argument("--eta-omega-t-list", default="20,40,80,160",
                   help="comma-separated ramp lengths")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep)

    p = add_parser("repro", help="re-run the acceptance checks and print a table")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config_file(ns, list(argv))
        return ns.func(ns)
    except (PhysicsConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())

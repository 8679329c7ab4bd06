"""Scripted reproduction of the release acceptance checks.

Each criterion function recomputes its quantities from scratch and returns a
CriterionResult with the measured values, so the CLI `repro` subcommand and
the test suite share one source of truth for thresholds.

Criterion 3 (and the witness follow-up in criterion 6) is evaluated twice:
once at the corrected strict-adiabatic preset, where the required transfer
quality holds, and once at the originally stated demo-speed settings
(eta*omega_bar*T = 40 at delta = 20*eta*omega_bar).  The stated settings
cannot reach the required fidelity in this model: the transfer bottleneck is
the second-order two-photon gap ~ (eta*omega_bar)^2 / delta, which those
numbers make about eight times too slow for the ramp.  The stated-settings
rows are therefore reported as documented shortfalls with their measured
values, not silently retuned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import certification, dark_state, evolution, measurement, model, observables, spin_algebra

PAPER_WITNESS = 5.46
PAPER_SIGMA_WITNESS = 0.07
PAPER_POPULATIONS = (0.00, 0.03, 0.88, 0.03, 0.03)
PAPER_SIGMA_POPULATIONS = (0.00, 0.02, 0.03, 0.02, 0.02)
PAPER_BOUNDS = (0.84, 0.88)
PAPER_TWO_ION_POPULATIONS = (0.516, 0.033, 0.451)
PAPER_TWO_ION_AMPLITUDE = 0.95
PAPER_TWO_ION_FIDELITY = 0.96


@dataclass
class CriterionResult:
    cid: str
    description: str
    passed: bool
    details: list[str] = field(default_factory=list)
    documented_shortfall: bool = False

    @property
    def verdict(self) -> str:
        if self.passed:
            return "PASS"
        return "FAIL (documented shortfall)" if self.documented_shortfall else "FAIL"


@lru_cache(maxsize=None)
def strict_trajectory(n_ions: int) -> evolution.Trajectory:
    schedule, params = evolution.adiabatic_preset("strict", n_ions)
    return evolution.integrate_reduced(schedule, params)


@lru_cache(maxsize=None)
def fast_trajectory(n_ions: int) -> evolution.Trajectory:
    schedule, params = evolution.adiabatic_preset("fast", n_ions)
    return evolution.integrate_reduced(schedule, params)


def _transfer_numbers(traj: evolution.Trajectory):
    n = traj.n_ions
    jz = np.arange(n + 1) - n / 2
    final_jz = float(np.sum(jz * np.abs(traj.final_state()) ** 2))
    target = dark_state.dark_coefficients(n, 1.0, 1.0).chain_vector
    mid_fid = float(abs(np.vdot(target, traj.midpoint_state())) ** 2)
    return final_jz, mid_fid


def criterion_1() -> CriterionResult:
    """Dark states are exact chain kernels and Jx null vectors; printed
    two- and four-ion expansions match to 1e-12."""
    worst_h = 0.0
    worst_jx = 0.0
    grid = np.linspace(0.2, 2.0, 10)
    for n in (2, 4, 6):
        for wr in grid:
            for wb in grid:
                params = model.SystemParams(n_ions=n, omega_r=wr, omega_b=wb, delta=7.0)
                h = model.reduced_hamiltonian(params)
                psi = dark_state.dark_coefficients(n, wr, wb)
                worst_h = max(worst_h, dark_state.verify_dark(psi, h))
        worst_jx = max(worst_jx, dark_state.jx_annihilation_check(n))
    two = dark_state.dark_coefficients(2, 1.0, 1.0).amplitudes
    four = dark_state.dark_coefficients(4, 1.0, 1.0).amplitudes
    err_two = float(np.max(np.abs(two - np.array([1, -1]) / np.sqrt(2))))
    err_four = float(np.max(np.abs(
        four - np.array([np.sqrt(3 / 8), -np.sqrt(1 / 4), np.sqrt(3 / 8)])
    )))
    passed = worst_h < 1e-10 and worst_jx < 1e-10 and err_two < 1e-12 and err_four < 1e-12
    return CriterionResult(
        "1", "dark-state algebra", passed,
        [f"max ||H psi_d|| = {worst_h:.2e} (< 1e-10)",
         f"max ||Jx psi_d|| = {worst_jx:.2e} (< 1e-10)",
         f"printed-expansion errors: N=2 {err_two:.2e}, N=4 {err_four:.2e} (< 1e-12)"],
    )


def criterion_2() -> CriterionResult:
    """Closed-form couplings equal full 2^N-space matrix elements to 1e-12."""
    worst = 0.0
    for n in range(1, 9):
        jp = spin_algebra.full_space_oracle(n, "j+").matrix
        for m in range(n):
            bra = spin_algebra.dicke_state_full(n, m + 1)
            ket = spin_algebra.dicke_state_full(n, m)
            element = float(np.real(np.vdot(bra, jp @ ket)))
            worst = max(worst, abs(element - spin_algebra.collective_coupling(n, m)))
    return CriterionResult(
        "2", "coupling oracle", worst < 1e-12,
        [f"max |formula - oracle| over N <= 8 = {worst:.2e} (< 1e-12)"],
    )


def criterion_3_strict() -> CriterionResult:
    """Adiabatic transfer at the strict preset: full transfer and >= 0.99
    midpoint fidelity to the half-excited Dicke state."""
    final_jz, mid_fid = _transfer_numbers(strict_trajectory(4))
    passed = final_jz >= 1.98 and mid_fid >= 0.99
    return CriterionResult(
        "3", "adiabatic transfer (strict preset, eta*omega_bar*T = 480)", passed,
        [f"final <Jz> = {final_jz:.6f} (>= 1.98)",
         f"midpoint fidelity = {mid_fid:.6f} (>= 0.99)"],
    )


def criterion_3_stated() -> CriterionResult:
    """Same thresholds at the originally stated eta*omega_bar*T = 40 tuple."""
    final_jz, mid_fid = _transfer_numbers(fast_trajectory(4))
    passed = final_jz >= 1.98 and mid_fid >= 0.99
    return CriterionResult(
        "3s", "adiabatic transfer (stated settings, eta*omega_bar*T = 40)", passed,
        [f"final <Jz> = {final_jz:.6f} (>= 1.98)",
         f"midpoint fidelity = {mid_fid:.6f} (>= 0.99)",
         "two-photon gap ~ (eta*omega_bar)^2/delta is too small at these settings"],
        documented_shortfall=not passed,
    )


def _model_agreement(n_ions: int, delta: float) -> float:
    schedule = evolution.PulseSchedule(total_time=40.0, omega_bar=1.0)
    params = model.SystemParams(n_ions=n_ions, eta=1.0, delta=delta)
    reduced = evolution.integrate_reduced(
        schedule, params, coupling_scale=model.CALIBRATED_COUPLING_SCALE
    )
    full = evolution.integrate_full(schedule, params)
    t_mid = schedule.total_time / 2
    chain_mid = model.embed_chain_state(reduced.midpoint_state(), n_ions, params.n_max)
    full_mid = model.interaction_to_chain_frame(full.midpoint_state(), t_mid, params)
    return float(abs(np.vdot(chain_mid, full_mid)) ** 2)


def calibrate_coupling_scale(n_ions: int = 2) -> tuple[float, float]:
    """Scan the chain coupling scale against the full model; returns the
    best scale on the scan grid and its midpoint agreement."""
    schedule = evolution.PulseSchedule(total_time=40.0, omega_bar=1.0)
    params = model.SystemParams(n_ions=n_ions, eta=1.0, delta=20.0)
    full = evolution.integrate_full(schedule, params)
    full_mid = model.interaction_to_chain_frame(
        full.midpoint_state(), schedule.total_time / 2, params
    )
    best_scale, best_fid = None, -1.0
    for scale in np.arange(0.30, 0.725, 0.05):
        reduced = evolution.integrate_reduced(schedule, params, coupling_scale=scale)
        chain_mid = model.embed_chain_state(reduced.midpoint_state(), n_ions, params.n_max)
        fid = float(abs(np.vdot(chain_mid, full_mid)) ** 2)
        if fid > best_fid:
            best_scale, best_fid = float(scale), fid
    return best_scale, best_fid


def criterion_4() -> CriterionResult:
    """Full-vs-reduced midpoint agreement >= 0.95 at the calibrated coupling
    scale, improving when the detuning doubles."""
    fitted_scale, fitted_fid = calibrate_coupling_scale(2)
    details = [
        f"fitted coupling scale = {fitted_scale:.2f} "
        f"(agreement {fitted_fid:.6f}); calibrated value {model.CALIBRATED_COUPLING_SCALE}"
    ]
    passed = abs(fitted_scale - model.CALIBRATED_COUPLING_SCALE) < 0.026
    for n in (2, 4):
        fid_1 = _model_agreement(n, delta=20.0)
        fid_2 = _model_agreement(n, delta=40.0)
        details.append(
            f"N={n}: agreement {fid_1:.6f} (>= 0.95), at doubled delta {fid_2:.6f} (improves)"
        )
        passed = passed and fid_1 >= 0.95 and (1 - fid_2) < (1 - fid_1)
    return CriterionResult("4", "full-vs-reduced consistency", passed, details)


def criterion_5() -> CriterionResult:
    """Dark-state spin noise over the ramp angle: the x variance vanishes
    exactly at the midpoint and the endpoints are coherent-state noise."""
    thetas = np.linspace(0.0, np.pi, 81)
    var_x = np.empty_like(thetas)
    for k, theta in enumerate(thetas):
        wr, wb = 1 + np.cos(theta), 1 - np.cos(theta)
        if wb == 0:
            psi = spin_algebra.dicke_state(4, 0)
        else:
            psi = dark_state.dark_coefficients(4, wr, wb).spin_vector.astype(complex)
        var_x[k] = observables.spin_moments(psi).var_jx
    idx_min = int(np.argmin(var_x))
    idx_half = int(np.argmin(np.abs(thetas - np.pi / 2)))
    ends = observables.spin_moments(spin_algebra.dicke_state(4, 0))
    end_err = max(abs(ends.var_jx - 1), abs(ends.var_jy - 1), abs(ends.var_jz))
    passed = idx_min == idx_half and var_x[idx_min] < 1e-10 and end_err < 1e-10
    return CriterionResult(
        "5", "spin-noise profile", passed,
        [f"min var(Jx) = {var_x[idx_min]:.2e} at theta = {thetas[idx_min]:.6f} (pi/2 exactly)",
         f"endpoint variances (1, 1, 0) within {end_err:.2e}"],
    )


def criterion_6_strict() -> CriterionResult:
    """Witness: 6.000 on the ideal state, >= 5.9 on the strict midpoint."""
    ideal = spin_algebra.half_excited_x(4)
    w_ideal = observables.witness(ideal, ("y", "z"))
    rho = observables.spin_density_from_chain(strict_trajectory(4).midpoint_state())
    w_mid = observables.witness(rho, ("y", "z"))
    passed = (
        abs(w_ideal - 6.0) <= 1e-9
        and w_ideal > observables.WITNESS_THRESHOLD_FOUR_ION
        and w_mid >= 5.9
    )
    return CriterionResult(
        "6", "entanglement witness (strict preset)", passed,
        [f"ideal <W_yz> = {w_ideal:.12f} (= 6 +- 1e-9, > 5.23)",
         f"strict midpoint <W_yz> = {w_mid:.6f} (>= 5.9)"],
    )


def criterion_6_stated() -> CriterionResult:
    """Witness on the stated-settings midpoint (documents the shortfall)."""
    rho = observables.spin_density_from_chain(fast_trajectory(4).midpoint_state())
    w_mid = observables.witness(rho, ("y", "z"))
    passed = w_mid >= 5.9
    return CriterionResult(
        "6s", "entanglement witness (stated settings)", passed,
        [f"stated-settings midpoint <W_yz> = {w_mid:.6f} (>= 5.9)"],
        documented_shortfall=not passed,
    )


def criterion_7() -> CriterionResult:
    """The published measured inputs reproduce the published arithmetic."""
    lower = certification.fidelity_lower(PAPER_WITNESS, PAPER_POPULATIONS, 2)
    upper = certification.fidelity_upper(PAPER_POPULATIONS)
    lower4, upper4 = certification.fidelity_sandwich_4ion(PAPER_WITNESS, PAPER_POPULATIONS)
    p_minus, _, p_plus = PAPER_TWO_ION_POPULATIONS
    two_ion = observables.parity_fidelity(p_minus, p_plus, PAPER_TWO_ION_AMPLITUDE)
    passed = (
        abs(lower - PAPER_BOUNDS[0]) <= 0.005
        and abs(upper - PAPER_BOUNDS[1]) <= 0.005
        and abs(two_ion - PAPER_TWO_ION_FIDELITY) <= 0.005
        and abs(lower4 - lower) < 1e-12
        and abs(upper4 - upper) < 1e-12
    )
    return CriterionResult(
        "7", "paper-arithmetic reproduction", passed,
        [f"F_lo = {lower:.4f} (target 0.84 +- 0.005)",
         f"F_hi = {upper:.4f} (target 0.88 +- 0.005)",
         f"two-ion F = {two_ion:.4f} (target 0.96 +- 0.005)"],
    )


def criterion_8() -> CriterionResult:
    """Bound sandwich on 100 random pure and 100 random mixed four-qubit
    states; four-ion closed form identical to the general bound."""
    target = certification.half_excited_full(4, "x")
    worst_lo, worst_hi = np.inf, np.inf
    for seed in range(100):
        pure = certification.haar_random_pure(16, np.random.default_rng(seed))
        mixed = certification.random_mixture(16, 8, np.random.default_rng(1000 + seed))
        for state in (pure, mixed):
            rec = certification.certify_from_state(state, "x")
            fid = observables.direct_fidelity(state, target)
            worst_lo = min(worst_lo, fid - rec.f_lower)
            worst_hi = min(worst_hi, rec.f_upper - fid)
    rng = np.random.default_rng(2026)
    worst_eq = 0.0
    for _ in range(1000):
        w = rng.uniform(0, 6)
        pops = rng.uniform(0, 1, size=5)
        lo4, hi4 = certification.fidelity_sandwich_4ion(w, pops)
        worst_eq = max(
            worst_eq,
            abs(lo4 - certification.fidelity_lower(w, pops, 2)),
            abs(hi4 - certification.fidelity_upper(pops)),
        )
    passed = worst_lo > -1e-9 and worst_hi > -1e-9 and worst_eq < 1e-12
    return CriterionResult(
        "8", "bound-sandwich oracle", passed,
        [f"min(F - F_lo) = {worst_lo:.3e}, min(F_hi - F) = {worst_hi:.3e} (> -1e-9)",
         f"max |closed form - general| over 1000 inputs = {worst_eq:.2e} (< 1e-12)"],
    )


def criterion_9() -> CriterionResult:
    """Two-ion parity pipeline: exact on the ideal state, >= 0.99 on the
    strict-preset midpoint."""
    ideal = dark_state.dark_coefficients(2, 1.0, 1.0).spin_vector.astype(complex)
    scan_ideal = observables.parity_scan(ideal)
    rho = observables.spin_density_from_chain(strict_trajectory(2).midpoint_state())
    scan_mid = observables.parity_scan(rho)
    passed = (
        scan_ideal.amplitude >= 0.999
        and abs(scan_ideal.fidelity - 1.0) <= 1e-6
        and scan_mid.fidelity >= 0.99
    )
    return CriterionResult(
        "9", "parity pipeline", passed,
        [f"ideal A_p = {scan_ideal.amplitude:.8f} (>= 0.999), "
         f"F = {scan_ideal.fidelity:.8f} (1 +- 1e-6)",
         f"strict midpoint F = {scan_mid.fidelity:.6f} (>= 0.99)"],
    )


def _record_csv(rec) -> bytes:
    from .cli import format_csv

    header = [f"# generator = {rec.generator}", f"# seed = {rec.seed}",
              f"# stream = {rec.stream}", f"# n_shots = {rec.n_shots}"]
    rows = list(zip(rec.projections, rec.counts, rec.frequencies, rec.std_errors))
    return format_csv(header, ("projection", "count", "frequency", "std_error"),
                      rows).encode()


def criterion_10() -> CriterionResult:
    """Shot statistics within 3 sigma at 1e6 shots; seeded replay gives a
    byte-identical CSV record."""
    state = spin_algebra.rotation_y(4, np.pi / 2).matrix @ spin_algebra.dicke_state(4, 0)
    exact = observables.populations_along(state, "z")
    config = measurement.ShotConfig(n_shots=10**6, seed=20260810)
    rec = measurement.sample_populations(state, config, "z")
    sigma = np.sqrt(exact * (1 - exact) / config.n_shots)
    dev = np.abs(rec.frequencies - exact)
    within = bool(np.all(dev <= 3 * sigma + 1e-15))
    replay = measurement.sample_populations(state, config, "z")
    identical = _record_csv(rec) == _record_csv(replay)
    passed = within and identical
    return CriterionResult(
        "10", "shot-noise statistics", passed,
        [f"max |freq - p| / sigma = {float(np.max(dev / np.maximum(sigma, 1e-300))):.2f} (<= 3)",
         f"seeded replay CSV byte-identical: {identical}"],
    )


def run_all() -> list[CriterionResult]:
    return [
        criterion_1(),
        criterion_2(),
        criterion_3_strict(),
        criterion_3_stated(),
        criterion_4(),
        criterion_5(),
        criterion_6_strict(),
        criterion_6_stated(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]

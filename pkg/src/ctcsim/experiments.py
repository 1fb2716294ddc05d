"""Parameterized reproduction of the quantitative results, as tabular records.

Each sweep emits one SweepRecord per grid point carrying every figure of
merit at once (fixed sigma-z measurement, optimized measurement, trace
distance, identification probability) for both the loop circuit and the
standard-QM baseline, plus the solver diagnostics. Nothing is discarded;
the experiment id says which published panel a sweep corresponds to.

Grid points are independent pure computations; set CTCSIM_THREADS to
evaluate them on a thread pool (records are always emitted in grid order).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import CircuitKind, CircuitSpec
from .deutsch import (
    LocalPure,
    NonLocalEnsemble,
    ScenarioOutput,
    _iterate_with_diagnostics,
    run_scenario,
)
from .measures import (
    SIGMA_Z_AXIS,
    helstrom_success_probability,
    mismatch_probability,
    optimal_mismatch_probability,
    qm_baseline,
)
from .qmath import DensityMatrix, PureQubit, ValidationError, trace_distance

__all__ = [
    "SweepRecord",
    "ThresholdResult",
    "ThresholdNotFound",
    "WORKING_POINT_PHI",
    "WORKING_POINT_THETA",
    "nonlinearity_sweep",
    "discrimination_sweep",
    "decoherence_surface",
    "find_threshold",
    "optimal_measurement_sweep",
    "identification_sweep",
    "validate_records",
]

# Decoherence study working point: controlled Hadamard on the state pair
# {|H>, psi1(3pi/2)}, where the gate is optimal at zero noise.
WORKING_POINT_PHI = 3 * math.pi / 2
WORKING_POINT_THETA = math.pi / 4


@dataclass(frozen=True)
class SweepRecord:
    """One row of a reproduction experiment."""

    experiment_id: str
    phi: float
    phase: float
    theta_xz: float
    p: float
    epsilon: float
    prep_mode: str
    n_iterations: int
    L_ctc_sigma_z: float
    L_ctc_optimal: float
    D_ctc: float
    L_qm: float
    D_qm: float
    p_succ_ctc: float
    p_succ_qm: float
    fixed_point_residual: float
    consistency_fidelity: float
    fixed_set_dimension: int


@dataclass(frozen=True)
class ThresholdResult:
    """Noise level where the loop advantage over standard QM disappears."""

    parameter: str
    crossing: float
    bracket: tuple[float, float]
    achieved_tolerance: float


class ThresholdNotFound(RuntimeError):
    """No sign change found: the advantage region vanished (regression guard)."""


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CTCSIM_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    n = _thread_count()
    items = list(items)
    if n > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _pair_diagnostics(scenarios: list[ScenarioOutput]) -> tuple[float, float, int]:
    resid = max(s.fixed_point.residual for s in scenarios)
    fid = min(s.consistency_fidelity for s in scenarios)
    dim = max(s.fixed_point.fixed_set_dimension for s in scenarios)
    return resid, fid, dim


def _ctc_measures(o0: DensityMatrix, o1: DensityMatrix) -> dict:
    l_opt, _ = optimal_mismatch_probability(o0, o1)
    return {
        "L_ctc_sigma_z": mismatch_probability(o0, o1, SIGMA_Z_AXIS),
        "L_ctc_optimal": l_opt,
        "D_ctc": trace_distance(o0, o1),
        "p_succ_ctc": helstrom_success_probability(o0, o1),
    }


def _nonlinearity_record(phi: float, phase: float, n: int) -> SweepRecord:
    spec = CircuitSpec(kind=CircuitKind.SWAP_CNOT)
    out_psi, passes_psi = _iterate_with_diagnostics(PureQubit(phi, phase), n, spec)
    out_ref, passes_ref = _iterate_with_diagnostics(PureQubit(0.0, 0.0), n, spec)
    resid, fid, dim = _pair_diagnostics(passes_psi + passes_ref)
    qm = qm_baseline(phi, 0.0)
    return SweepRecord(
        experiment_id="fig3",
        phi=phi,
        phase=phase,
        theta_xz=0.0,
        p=0.0,
        epsilon=0.0,
        prep_mode="local_pure",
        n_iterations=n,
        **_ctc_measures(out_psi, out_ref),
        # The nonlinearity experiment compares against the fixed sigma-z
        # measurement on the un-evolved inputs (the reference state is
        # known, the swept one is not).
        L_qm=qm.L_sigma_z,
        D_qm=qm.trace_dist,
        p_succ_qm=qm.p_succ_optimal,
        fixed_point_residual=resid,
        consistency_fidelity=fid,
        fixed_set_dimension=dim,
    )


def nonlinearity_sweep(phi_grid: list[float] | None = None,
                       phase_grid: list[float] | None = None,
                       iterations: list[int] | None = None) -> list[SweepRecord]:
    """Nonlinear-evolution sweep (CNOT-then-SWAP loop) against the |H> reference.

    Defaults reproduce the 14 published states: polar angles
    {0, pi/4, pi/2, 3pi/4, pi} crossed with 4 phases, de-duplicated at the
    poles where the phase is meaningless, plus iterated-circuit rows for
    each n in `iterations`.
    """
    if phi_grid is None:
        phi_grid = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]
    if phase_grid is None:
        phase_grid = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
    if iterations is None:
        iterations = [2, 3, 4, 5]
    if not phi_grid or not phase_grid:
        raise ValidationError("sweep grids must be non-empty")

    points: list[tuple[float, float, int]] = []
    for n in [1] + list(iterations):
        for phi in phi_grid:
            at_pole = abs(math.sin(phi)) < 1e-15
            for phase in phase_grid[: 1 if at_pole else len(phase_grid)]:
                points.append((phi, phase, n))
    return _ordered_map(lambda t: _nonlinearity_record(*t), points)


def _discrimination_record(experiment_id: str, phi: float, theta: float,
                           p: float, epsilon: float, mode: str,
                           phase: float = 0.0) -> SweepRecord:
    spec = CircuitSpec(
        kind=CircuitKind.SWAP_THEN_CU, theta_xz=theta, gate_noise=epsilon, input_noise=p
    )
    psi0 = PureQubit(0.0, 0.0)
    psi1 = PureQubit(phi, phase)
    if mode == "local":
        s0 = run_scenario(spec, LocalPure(psi0))
        s1 = run_scenario(spec, LocalPure(psi1))
        o0, o1 = s0.rho_out_per_input[0], s1.rho_out_per_input[0]
        resid, fid, dim = _pair_diagnostics([s0, s1])
        prep = "local_pure"
    elif mode == "nonlocal":
        s = run_scenario(spec, NonLocalEnsemble((psi0, psi1), (0.5, 0.5)))
        o0, o1 = s.rho_out_per_input
        resid, fid, dim = _pair_diagnostics([s])
        prep = "nonlocal_ensemble"
    else:
        raise ValidationError(f"unknown preparation mode {mode!r}")
    qm = qm_baseline(phi, p)
    return SweepRecord(
        experiment_id=experiment_id,
        phi=phi,
        phase=phase,
        theta_xz=theta,
        p=p,
        epsilon=epsilon,
        prep_mode=prep,
        n_iterations=1,
        **_ctc_measures(o0, o1),
        # Discrimination experiments compare against standard QM with the
        # optimal measurement and full state knowledge.
        L_qm=qm.L_optimal,
        D_qm=qm.trace_dist,
        p_succ_qm=qm.p_succ_optimal,
        fixed_point_residual=resid,
        consistency_fidelity=fid,
        fixed_set_dimension=dim,
    )


def discrimination_sweep(mode: str, variant: str, grid_size: int | None = None,
                         experiment_id: str | None = None) -> list[SweepRecord]:
    """State-discrimination sweep for the pair {|H>, psi1(phi)}.

    variant "optimal-gate": phi over [0, 2pi) with theta = (phi - pi)/2;
    variant "fixed-state":  phi = 3pi/2, theta over [-pi/2, pi/2);
    variant "fixed-gate":   theta = pi/4, phi over [0, 2pi).

    The phi = 0 point (psi1 identical to the reference) is emitted with
    its degeneracy visible in fixed_set_dimension rather than skipped.
    """
    if variant == "fixed-state":
        grid_size = 64 if grid_size is None else grid_size
    else:
        grid_size = 32 if grid_size is None else grid_size
    if grid_size < 2:
        raise ValidationError("grid size must be >= 2")
    if experiment_id is None:
        experiment_id = f"{variant}-{mode}"

    if variant == "optimal-gate":
        points = [(2 * math.pi * k / grid_size, None) for k in range(grid_size)]
    elif variant == "fixed-gate":
        points = [(2 * math.pi * k / grid_size, WORKING_POINT_THETA) for k in range(grid_size)]
    elif variant == "fixed-state":
        points = [
            (WORKING_POINT_PHI, -math.pi / 2 + math.pi * j / grid_size)
            for j in range(grid_size)
        ]
    else:
        raise ValidationError(f"unknown sweep variant {variant!r}")

    def record(pt):
        phi, theta = pt
        if theta is None:
            theta = (phi - math.pi) / 2
        return _discrimination_record(experiment_id, phi, theta, 0.0, 0.0, mode)

    return _ordered_map(record, points)


def decoherence_surface(p_grid: list[float] | None = None,
                        eps_grid: list[float] | None = None) -> list[SweepRecord]:
    """Discrimination under both noise channels at the working point, local prep.

    The loop side keeps the sigma-z measurement and the QM side its
    decoherence-free optimal axis: the experimenter does not know the
    noise parameters.
    """
    if p_grid is None:
        p_grid = np.linspace(0.0, 1.0, 41).tolist()
    if eps_grid is None:
        eps_grid = np.linspace(0.0, 1.0, 41).tolist()
    for g in (p_grid, eps_grid):
        if any(not 0.0 <= x <= 1.0 for x in g):
            raise ValidationError("noise grids must stay within [0, 1]")
    points = [(p, e) for p in p_grid for e in eps_grid]
    return _ordered_map(
        lambda t: _discrimination_record(
            "fig6", WORKING_POINT_PHI, WORKING_POINT_THETA, t[0], t[1], "local"
        ),
        points,
    )


def _advantage_gap(parameter: str, x: float) -> float:
    """L_ctc(sigma_z) minus the QM baseline along one noise axis."""
    p, eps = (x, 0.0) if parameter == "p" else (0.0, x)
    rec = _discrimination_record(
        "threshold-probe", WORKING_POINT_PHI, WORKING_POINT_THETA, p, eps, "local"
    )
    return rec.L_ctc_sigma_z - rec.L_qm


def find_threshold(parameter: str, scan_points: int = 41,
                   tol: float = 1e-12) -> ThresholdResult:
    """Locate where the loop advantage dies along the p (eps=0) or epsilon (p=0) axis.

    Scans for a sign change first (the gap also vanishes at full noise, so
    a blind [0, 1] bracket would be ambiguous), then bisects it down.
    """
    if parameter not in ("p", "epsilon"):
        raise ValidationError(f"unknown threshold parameter {parameter!r}")
    xs = np.linspace(0.0, 1.0, scan_points)
    vals = [_advantage_gap(parameter, float(x)) for x in xs]
    bracket = None
    for i in range(len(xs) - 1):
        if vals[i] > 0.0 >= vals[i + 1]:
            bracket = (float(xs[i]), float(xs[i + 1]))
            break
    if bracket is None:
        raise ThresholdNotFound(f"no advantage crossing found along {parameter}")

    lo, hi = bracket
    flo = _advantage_gap(parameter, lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = _advantage_gap(parameter, mid)
        if (flo > 0) == (fm > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    crossing = (lo + hi) / 2
    return ThresholdResult(
        parameter=parameter,
        crossing=crossing,
        bracket=bracket,
        achieved_tolerance=hi - lo,
    )


def _retagged(records: list[SweepRecord], experiment_id: str) -> list[SweepRecord]:
    from dataclasses import replace

    return [replace(r, experiment_id=experiment_id) for r in records]


def optimal_measurement_sweep(mode: str, variant: str,
                              grid_size: int | None = None) -> list[SweepRecord]:
    """Discrimination sweeps where the loop side also measures optimally.

    Identical grids to discrimination_sweep; the quantity of interest is
    the L_ctc_optimal column (every record carries both measurements).
    """
    return _retagged(
        discrimination_sweep(mode, variant, grid_size), f"s1-{variant}-{mode}"
    )


def identification_sweep(mode: str, variant: str,
                         grid_size: int | None = None) -> list[SweepRecord]:
    """Discrimination sweeps scored as a state-identification game.

    The quantity of interest is p_succ_ctc vs p_succ_qm (the Helstrom
    probability on the loop outputs vs on the raw inputs).
    """
    return _retagged(
        discrimination_sweep(mode, variant, grid_size), f"s2-{variant}-{mode}"
    )


def validate_records(records: list[SweepRecord]) -> list[str]:
    """Regression guard: list of human-readable invariant violations (empty = good)."""
    problems = []
    for i, r in enumerate(records):
        if r.fixed_point_residual > 1e-10:
            problems.append(f"row {i}: residual {r.fixed_point_residual:.3e} > 1e-10")
        if r.consistency_fidelity < 1 - 1e-9:
            problems.append(f"row {i}: consistency fidelity {r.consistency_fidelity}")
        for name in ("L_ctc_sigma_z", "L_ctc_optimal", "D_ctc", "L_qm", "D_qm",
                     "p_succ_ctc", "p_succ_qm"):
            v = getattr(r, name)
            if not -1e-12 <= v <= 1 + 1e-12:
                problems.append(f"row {i}: {name} = {v} outside [0, 1]")
    return problems

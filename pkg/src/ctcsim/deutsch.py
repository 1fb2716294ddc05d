"""Fixed-point engine for the time-loop consistency condition.

The loop qubit must satisfy rho = Tr_1[E(rho_in (x) rho)], where E is the
two-qubit interaction channel: the state entering the wormhole equals the
state leaving it. This module solves that equation for arbitrary channels
and preparation modes, evolves chronology-respecting inputs through the
loop (rho_out = Tr_2[E(rho_in (x) rho)]), and exposes the closed forms
that serve as independent oracles for the matrix engine.

Conventions follow qmath: qubit 1 is the chronology-respecting rail and
qubit 2 the loop rail, so Tr_1 keeps the loop qubit and Tr_2 the output.

Where the fixed-point set has more than one state, the solver returns the
von Neumann entropy maximizer (Deutsch's prescription); the degeneracy is
reported, never hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import CircuitKind, CircuitSpec, QubitChannel, build_interaction, depolarize
from .qmath import (
    DensityMatrix,
    PureQubit,
    Subsystem,
    ValidationError,
    _eig_range_2x2,
    _partial_trace_raw,
    fidelity,
    trace_distance,
    von_neumann_entropy,
)

__all__ = [
    "RESIDUAL_TOL",
    "EIGENVALUE_ONE_TOL",
    "ConvergenceError",
    "LocalPure",
    "ImproperMixed",
    "NonLocalEnsemble",
    "PreparationMode",
    "FixedPointResult",
    "ScenarioOutput",
    "consistency_map",
    "superoperator",
    "solve_fixed_point",
    "evolve_output",
    "run_scenario",
    "proper_mixture_output",
    "iterate_circuit",
    "swap_cnot_closed_form",
    "resource_state_vector",
]

RESIDUAL_TOL = 1e-10
# Tolerance for counting a superoperator eigenvalue as exactly 1: detects
# true degeneracies reliably at dim-4 superoperator scale.
EIGENVALUE_ONE_TOL = 1e-9


class ConvergenceError(RuntimeError):
    """The iterative solver did not reach the requested tolerance."""


@dataclass(frozen=True)
class LocalPure:
    """A pure state prepared directly on the input qubit.

    The consistency condition acts shot-by-shot, so this single state (after
    any input depolarization) is exactly what the loop adapts to.
    """

    state: PureQubit


@dataclass(frozen=True)
class ImproperMixed:
    """A mixed input that is the reduced state of some larger system.

    The loop sees the density matrix itself, not an ensemble of pure shots.
    """

    rho: DensityMatrix


@dataclass(frozen=True)
class NonLocalEnsemble:
    """States prepared remotely via an entangled resource and post-selection.

    No classical record of the post-selection outcome exists at the loop, so
    the loop adapts to the unconditioned mixture sum_i p_i |psi_i><psi_i|.
    """

    states: tuple[PureQubit, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        states = tuple(self.states)
        probs = tuple(float(p) for p in self.probs)
        if len(states) != len(probs) or not states:
            raise ValidationError("ensemble needs matching, non-empty states and probs")
        if any(p < 0 for p in probs):
            raise ValidationError("ensemble probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValidationError(f"ensemble probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    def mixture(self) -> DensityMatrix:
        m = sum(p * s.density().mat for p, s in zip(self.probs, self.states))
        return DensityMatrix(m)


PreparationMode = LocalPure | ImproperMixed | NonLocalEnsemble


@dataclass(frozen=True)
class FixedPointResult:
    """Solved loop state plus solver diagnostics.

    fixed_set_dimension is the dimension of the eigenvalue-1 eigenspace of
    the consistency superoperator; values above 1 mean the returned state
    is the entropy maximizer over a continuum of solutions.
    """

    rho_ctc: DensityMatrix
    residual: float
    iterations: int
    fixed_set_dimension: int
    entropy: float


@dataclass(frozen=True)
class ScenarioOutput:
    fixed_point: FixedPointResult
    rho_out_per_input: tuple[DensityMatrix, ...]
    consistency_fidelity: float


def _apply_loop(rho_in4: np.ndarray, interaction: QubitChannel, rho: np.ndarray,
                keep: Subsystem) -> np.ndarray:
    """Raw map X -> Tr_traced[E(rho_in (x) X)] without validation (linear in X)."""
    # Inlined 2x2 Kronecker product; np.kron overhead dominates at this size.
    joint = (rho_in4[:, None, :, None] * rho[None, :, None, :]).reshape(4, 4)
    return _partial_trace_raw(interaction.apply_raw(joint), keep)


def consistency_map(rho_in: DensityMatrix, interaction: QubitChannel,
                    rho: DensityMatrix) -> DensityMatrix:
    """One application of the consistency condition: Tr_1[E(rho_in (x) rho)]."""
    if rho_in.dim != 2 or rho.dim != 2:
        raise ValidationError("consistency_map acts on single-qubit states")
    return DensityMatrix(_apply_loop(rho_in.mat, interaction, rho.mat, Subsystem.FIRST))


def evolve_output(input_state: DensityMatrix, rho_ctc: DensityMatrix,
                  interaction: QubitChannel) -> DensityMatrix:
    """State leaving the loop region: Tr_2[E(input (x) rho_ctc)]."""
    if input_state.dim != 2 or rho_ctc.dim != 2:
        raise ValidationError("evolve_output acts on single-qubit states")
    return DensityMatrix(
        _apply_loop(input_state.mat, interaction, rho_ctc.mat, Subsystem.SECOND)
    )


def superoperator(rho_in: DensityMatrix, interaction: QubitChannel) -> np.ndarray:
    """4x4 matrix M with M @ vec(rho) = vec(consistency_map(rho)) for all rho.

    vec is row-major flattening of the 2x2 matrix.
    """
    cols = []
    for k in range(4):
        basis = np.zeros((2, 2), dtype=complex)
        basis.flat[k] = 1.0
        img = _apply_loop(rho_in.mat, interaction, basis, Subsystem.FIRST)
        cols.append(img.reshape(-1))
    return np.column_stack(cols)


def _hermitian_kernel_basis(kernel: np.ndarray) -> list[np.ndarray]:
    """Orthonormal real basis of the Hermitian matrices inside span(kernel columns).

    The consistency map preserves Hermiticity, so its fixed subspace is
    closed under X -> X^dag and splits into Hermitian + i*Hermitian parts.
    """
    candidates = []
    for k in range(kernel.shape[1]):
        x = kernel[:, k].reshape(2, 2)
        candidates.append((x + x.conj().T) / 2.0)
        candidates.append((x - x.conj().T) / 2.0j)
    basis: list[np.ndarray] = []
    for c in candidates:
        for b in basis:
            c = c - np.trace(b.conj().T @ c).real * b
        n = math.sqrt(np.trace(c.conj().T @ c).real)
        if n > 1e-9:
            basis.append(c / n)
    return basis


def _psd_interval(rho0: np.ndarray, direction: np.ndarray) -> tuple[float, float]:
    """[t_lo, t_hi] with rho0 + t*direction PSD; empty sets raise.

    For 2x2 trace-1 matrices positivity is det >= 0, and det(rho0 + t D)
    is a downward-opening quadratic in t (D is traceless), so the set is
    exactly the interval between its roots.
    """
    def det_at(t: float) -> float:
        return float(np.linalg.det(rho0 + t * direction).real)

    d0 = det_at(0.0)
    # Quadratic a t^2 + b t + c through t = -1, 0, 1.
    c = d0
    dp, dm = det_at(1.0), det_at(-1.0)
    a = (dp + dm) / 2.0 - c
    b = (dp - dm) / 2.0
    if abs(a) < 1e-15:
        # Degenerate direction (zero Bloch part): positivity does not vary.
        if c < -1e-12:
            raise ValidationError("no positive state in the fixed-point set")
        return (0.0, 0.0)
    disc = b * b - 4 * a * c
    if disc < 0:
        raise ValidationError("no positive state in the fixed-point set")
    r1 = (-b - math.sqrt(disc)) / (2 * a)
    r2 = (-b + math.sqrt(disc)) / (2 * a)
    return (min(r1, r2), max(r1, r2))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Argmax of a strictly concave f on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


def _entropy_of(mat: np.ndarray) -> float:
    lam = np.clip(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0), 0.0, None)
    lam = lam[lam > 1e-15]
    return float(-(lam * np.log2(lam)).sum())


def _clip_to_density(mat: np.ndarray) -> DensityMatrix:
    """Round a numerically almost-valid state onto the density-matrix set."""
    h = (mat + mat.conj().T) / 2.0
    if _eig_range_2x2(h)[0] >= 0.0:
        return DensityMatrix(h / h.trace().real)
    lam, v = np.linalg.eigh(h)
    lam = np.clip(lam, 0.0, None)
    h = (v * lam) @ v.conj().T
    return DensityMatrix(h / h.trace().real)


def _max_entropy_fixed_state(m_super: np.ndarray, kernel: np.ndarray) -> DensityMatrix:
    """Entropy maximizer over {density matrices rho : vec(rho) in kernel span}."""
    basis = _hermitian_kernel_basis(kernel)
    if not basis:
        raise ValidationError("fixed-point set contains no Hermitian state (non-CPTP bug)")
    traces = np.array([np.trace(b).real for b in basis])
    if np.abs(traces).max() < 1e-9:
        raise ValidationError("fixed-point set contains no unit-trace state (non-CPTP bug)")
    # Base point: trace-functional projection, normalized to trace 1.
    base = sum(t * b for t, b in zip(traces, basis))
    rho0 = base / np.trace(base).real
    directions = []
    for b in basis:
        d = b - np.trace(b).real * rho0
        for e in directions:
            d = d - np.trace(e.conj().T @ d).real * e
        n = math.sqrt(np.trace(d.conj().T @ d).real)
        if n > 1e-9:
            directions.append(d / n)

    if not directions:
        return _clip_to_density(rho0)

    # The maximally mixed state globally maximizes entropy: if it is a fixed
    # point, no search is needed.
    half = np.eye(2, dtype=complex) / 2
    if np.abs((m_super @ half.reshape(-1)) - half.reshape(-1)).max() < 1e-10:
        return DensityMatrix(half)

    if len(directions) == 1:
        d = directions[0]
        lo, hi = _psd_interval(rho0, d)
        t = _golden_max(lambda s: _entropy_of(rho0 + s * d), lo, hi)
        return _clip_to_density(rho0 + t * d)

    # Rare many-parameter case: cyclic coordinate ascent, one golden-section
    # line search per direction, until the entropy stops improving.
    current = rho0.copy()
    for _ in range(100):
        # The base point need not be positive yet; climb the smallest
        # eigenvalue (concave along every line) into the cone first.
        if np.linalg.eigvalsh(current).min() >= -1e-13:
            break
        for d in directions:
            t = _golden_max(
                lambda s: float(np.linalg.eigvalsh(current + s * d).min()), -1.0, 1.0
            )
            current = current + t * d
    else:
        raise ValidationError("no positive state in the fixed-point set")
    best = _entropy_of(current)
    for _ in range(200):
        for d in directions:
            lo, hi = _psd_interval(current, d)
            t = _golden_max(lambda s: _entropy_of(current + s * d), lo, hi)
            current = current + t * d
        e = _entropy_of(current)
        if e - best < 1e-14:
            break
        best = e
    return _clip_to_density(current)


def solve_fixed_point(rho_in: DensityMatrix, interaction: QubitChannel,
                      method: str = "eigen_max_entropy", tol: float = 1e-12,
                      max_iter: int = 10000) -> FixedPointResult:
    """Solve rho = Tr_1[E(rho_in (x) rho)] for the loop state.

    method "eigen_max_entropy" (authoritative): extract the eigenvalue-1
    eigenspace of the consistency superoperator and return the entropy
    maximizer over its intersection with the density-matrix set.

    method "damped_iteration": rho <- (map(rho) + rho)/2 from the maximally
    mixed state until the step is below tol. Agrees with the eigen method
    whenever the fixed point is unique; on degenerate sets it lands
    somewhere in the set (residual still checked).
    """
    if rho_in.dim != 2:
        raise ValidationError("fixed-point input must be a single-qubit state")
    m_super = superoperator(rho_in, interaction)
    sing = np.linalg.svd(m_super - np.eye(4), compute_uv=False)
    fixed_dim = int((sing < EIGENVALUE_ONE_TOL).sum())

    iterations = 0
    if method == "eigen_max_entropy":
        if fixed_dim == 0:
            raise ValidationError(
                "consistency superoperator has no eigenvalue-1 eigenspace (non-CPTP bug)"
            )
        _, _, vh = np.linalg.svd(m_super - np.eye(4))
        kernel = vh[4 - fixed_dim:].conj().T
        rho = _max_entropy_fixed_state(m_super, kernel)
    elif method == "damped_iteration":
        cur = np.eye(2, dtype=complex) / 2
        step = math.inf
        while step > tol:
            if iterations >= max_iter:
                raise ConvergenceError(
                    f"damped iteration did not converge in {max_iter} steps (step = {step:.3e})"
                )
            nxt = 0.5 * (m_super @ cur.reshape(-1)).reshape(2, 2) + 0.5 * cur
            step = float(np.abs(np.linalg.eigvalsh(nxt - cur)).sum() / 2)
            cur = nxt
            iterations += 1
        rho = _clip_to_density(cur)
    else:
        raise ValidationError(f"unknown solver method {method!r}")

    image = consistency_map(rho_in, interaction, rho)
    residual = trace_distance(rho, image)
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(
            f"fixed-point residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}"
        )
    return FixedPointResult(
        rho_ctc=rho,
        residual=residual,
        iterations=iterations,
        fixed_set_dimension=fixed_dim,
        entropy=von_neumann_entropy(rho),
    )


def _effective_input(prep: PreparationMode, p: float) -> DensityMatrix:
    """Reduced state the loop adapts to, including input depolarization."""
    if isinstance(prep, LocalPure):
        rho = prep.state.density()
    elif isinstance(prep, ImproperMixed):
        rho = prep.rho
    elif isinstance(prep, NonLocalEnsemble):
        rho = prep.mixture()
    else:
        raise ValidationError(f"unknown preparation mode {prep!r}")
    return depolarize(rho, p) if p > 0 else rho


def run_scenario(spec: CircuitSpec, prep: PreparationMode,
                 inputs_to_evolve: list[PureQubit | DensityMatrix] | None = None,
                 method: str = "eigen_max_entropy") -> ScenarioOutput:
    """Solve one complete loop scenario and evolve the requested inputs.

    The loop state is solved once, from the reduced input the preparation
    mode dictates (pure state for LocalPure, the given matrix for
    ImproperMixed, the unconditioned mixture for NonLocalEnsemble), after
    input depolarization.

    For local and improper preparations each requested input is depolarized
    and sent through the loop individually. For NonLocalEnsemble the
    interaction correlates the output with the loop qubit, not with the
    remote ancilla, so conditioning on the (space-like separated)
    post-selection outcome cannot steer it: every requested input emerges
    as the evolved ensemble mixture.
    """
    interaction = build_interaction(spec)
    p = spec.input_noise
    rho_in = _effective_input(prep, p)
    fp = solve_fixed_point(rho_in, interaction, method=method)

    if inputs_to_evolve is None:
        if isinstance(prep, LocalPure):
            inputs_to_evolve = [prep.state]
        elif isinstance(prep, ImproperMixed):
            inputs_to_evolve = [prep.rho]
        else:
            inputs_to_evolve = list(prep.states)

    outs = []
    for item in inputs_to_evolve:
        if isinstance(prep, NonLocalEnsemble):
            evolved_in = rho_in
        else:
            rho = item.density() if isinstance(item, PureQubit) else item
            evolved_in = depolarize(rho, p) if p > 0 else rho
        outs.append(evolve_output(evolved_in, fp.rho_ctc, interaction))

    cf = fidelity(fp.rho_ctc, consistency_map(rho_in, interaction, fp.rho_ctc))
    return ScenarioOutput(
        fixed_point=fp,
        rho_out_per_input=tuple(outs),
        consistency_fidelity=cf,
    )


def proper_mixture_output(spec: CircuitSpec, states: list[PureQubit],
                          probs: list[float]) -> DensityMatrix:
    """Loop output for a proper mixture: classical fluctuations in the preparation.

    Each pure state runs through its own complete scenario (own fixed
    point), and the outputs are averaged with the ensemble weights. Under
    nonlinear evolution this generally differs from feeding the same
    reduced density matrix in as an improper mixture.
    """
    if abs(sum(probs) - 1.0) > 1e-12 or any(q < 0 for q in probs):
        raise ValidationError("proper mixture needs non-negative probs summing to 1")
    out = np.zeros((2, 2), dtype=complex)
    for q, psi in zip(probs, states):
        res = run_scenario(spec, LocalPure(psi))
        out += q * res.rho_out_per_input[0].mat
    return DensityMatrix(out)


def iterate_circuit(input_state: PureQubit, n: int,
                    spec: CircuitSpec | None = None) -> DensityMatrix:
    """Feed the loop output back through the circuit n times in total.

    Pass 1 treats the pure input shot-by-shot; every later pass receives
    the previous output as an improper mixture, because that mixture comes
    from tracing out the loop rail, not from classical fluctuation.
    """
    out, _ = _iterate_with_diagnostics(input_state, n, spec)
    return out


def _iterate_with_diagnostics(
    input_state: PureQubit, n: int, spec: CircuitSpec | None = None
) -> tuple[DensityMatrix, list[ScenarioOutput]]:
    if n < 1:
        raise ValidationError("iteration count must be >= 1")
    if spec is None:
        spec = CircuitSpec(kind=CircuitKind.SWAP_CNOT)
    if spec.gate_noise != 0.0 or spec.input_noise != 0.0:
        raise ValidationError("iterated circuits are defined for noise-free specs only")
    passes = []
    result = run_scenario(spec, LocalPure(input_state))
    passes.append(result)
    state = result.rho_out_per_input[0]
    for _ in range(n - 1):
        result = run_scenario(spec, ImproperMixed(state))
        passes.append(result)
        state = result.rho_out_per_input[0]
    return state, passes


def swap_cnot_closed_form(h_weight: float) -> tuple[DensityMatrix, DensityMatrix]:
    """Analytic (rho_out, rho_ctc) for the CNOT-then-SWAP loop circuit.

    For an input with |H>-population a (and |V>-population b = 1-a) the
    loop state is diag(a, b) and the output diag(a^2 + b^2, 2ab): the
    nonlinear map studied by Bacon (quant-ph/0309189). Serves as the
    independent oracle for the matrix engine.
    """
    if not 0.0 <= h_weight <= 1.0:
        raise ValidationError(f"population {h_weight} outside [0, 1]")
    a, b = float(h_weight), 1.0 - float(h_weight)
    rho_out = DensityMatrix(np.diag([a * a + b * b, 2 * a * b]).astype(complex))
    rho_ctc = DensityMatrix(np.diag([a, b]).astype(complex))
    return rho_out, rho_ctc


def resource_state_vector(psi0: PureQubit, psi1: PureQubit) -> np.ndarray:
    """Entangled resource (|0>|psi0> + |1>|psi1>)/sqrt(2) for remote preparation.

    Projecting the first (ancilla) qubit onto |0> or |1> leaves the second
    qubit in psi0 or psi1; tracing the ancilla out instead gives the
    mixture the loop adapts to.
    """
    v = np.zeros(4, dtype=complex)
    v[:2] = psi0.vector() / math.sqrt(2)
    v[2:] = psi1.vector() / math.sqrt(2)
    return v

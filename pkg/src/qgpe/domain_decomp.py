"""Overlapping three-subdomain decomposition with norm-preserving embedding.

The grid index set {0, ..., N-1} is covered by three circular runs of
2**(n-1) consecutive indices (modulo N).  Overlap cardinalities follow the
uniform-as-possible split

    n1 = n2 = (2**(n-1) + (-1)**n) / 3,    n3 = n1 + (-1)**(n-1),

with subdomain 1 starting at index 0, subdomain 2 at 2**(n-1) - n1 and
subdomain 3 at 2**n - n1 - n2.  A subdomain update optimizes a local state
on n-1 qubits and splices it into the global wavefunction through an
embedding that rescales the interior so the physical normalization
dx * sum |psi|^2 = 1 is conserved exactly, while the two boundary values
of the run are left untouched.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .circuit import AnsatzSpec, ansatz_state, cost_gradient_through_circuit, initial_parameters
from .exceptions import ConfigurationError, DegenerateStateError, DimensionError
from .grid import ProblemSpec, constant_state, energy_and_gradient, l2_error
from .newton import NewtonResult
from .optimize import OptimizerConfig, minimize
from .trace import TraceRow, TrainingTrace

# local mass below this is treated as degenerate (cannot be rescaled)
_MASS_FLOOR = 1e-300

# "to convergence" local schedule: budget-unlimited up to a safety cap
CONVERGE = "converge"
_CONVERGE_CAP = 5000


@dataclass(frozen=True)
class Subdomain:
    start: int
    indices: np.ndarray    # circular run of global indices, length 2**(n-1)
    interior: np.ndarray   # run without its first and last elements
    boundary: tuple[int, int]   # (first, last) element of the run


@dataclass(frozen=True)
class SubdomainLayout:
    n: int
    N: int
    subdomains: tuple[Subdomain, Subdomain, Subdomain]
    overlaps: tuple[int, int, int]    # |I1 & I2|, |I2 & I3|, |I3 & I1|

    def subdomain(self, k: int) -> Subdomain:
        if k not in (1, 2, 3):
            raise ConfigurationError(f"subdomain label must be 1, 2 or 3, got {k}")
        return self.subdomains[k - 1]


def _run(start: int, length: int, N: int) -> Subdomain:
    idx = (start + np.arange(length)) % N
    return Subdomain(
        start=start,
        indices=idx,
        interior=idx[1:-1],
        boundary=(int(idx[0]), int(idx[-1])),
    )


def build_layout(n: int) -> SubdomainLayout:
    """Three overlapping subdomains of 2**(n-1) consecutive indices each."""
    if n < 3:
        raise ConfigurationError(f"the three-subdomain layout needs n >= 3, got n={n}")
    N = 1 << n
    half = 1 << (n - 1)
    n1 = (half + (-1) ** n) // 3
    n2 = n1
    n3 = n1 + (-1) ** (n - 1)
    starts = (0, half - n1, 2 * half - n1 - n2)
    subs = tuple(_run(s, half, N) for s in starts)
    return SubdomainLayout(n=n, N=N, subdomains=subs, overlaps=(n1, n2, n3))


def embed(psi_old: np.ndarray, phi_k: np.ndarray, layout: SubdomainLayout, k: int) -> np.ndarray:
    """Splice a unit-norm local state into the global wavefunction.

    The interior of subdomain k becomes alpha * phi_k with
    alpha = sqrt( sum_{interior} |psi_old|^2 / sum_{interior} |phi_k|^2 ),
    which moves exactly the interior mass of psi_old onto the new values;
    everything else, including the run's two boundary points, is copied
    from psi_old, so the global normalization is conserved.
    """
    sub = layout.subdomain(k)
    psi_old = np.asarray(psi_old, dtype=np.complex128)
    phi_k = np.asarray(phi_k, dtype=np.complex128)
    if psi_old.shape != (layout.N,):
        raise DimensionError(f"global state has shape {psi_old.shape}, expected ({layout.N},)")
    if phi_k.shape != (sub.indices.size,):
        raise DimensionError(
            f"local state has shape {phi_k.shape}, expected ({sub.indices.size},)"
        )
    psi_new, _ = _embed_rescale(psi_old, phi_k, sub)
    return psi_new


def _embed_rescale(psi_old, phi_k, sub):
    phi_int = phi_k[1:-1]
    old_mass = float(np.sum(np.abs(psi_old[sub.interior]) ** 2))
    new_mass = float(np.sum(np.abs(phi_int) ** 2))
    if new_mass <= _MASS_FLOOR:
        raise DegenerateStateError(f"local state carries no interior mass on subdomain {sub.start}")
    if old_mass <= _MASS_FLOOR:
        raise DegenerateStateError(
            f"global state carries no interior mass on subdomain {sub.start}"
        )
    alpha = np.sqrt(old_mass / new_mass)
    psi_new = psi_old.copy()
    psi_new[sub.interior] = alpha * phi_int
    return psi_new, alpha


def _embedded_energy_and_gradient(psi_current, phi_k, sub, prob):
    """Energy of the embedded state and its gradient w.r.t. the local state.

    Returns (E, g_phi, psi_new) with g_phi = 2 dE/dphi* (zero on the two
    boundary positions, which the embedding ignores).  Chain rule through
    u = alpha(phi) * phi on the interior, where alpha normalizes mass.
    """
    psi_new, alpha = _embed_rescale(psi_current, phi_k, sub)
    value, grad_psi = energy_and_gradient(psi_new, prob)

    phi_int = phi_k[1:-1]
    new_mass = float(np.sum(np.abs(phi_int) ** 2))
    g_u = grad_psi[sub.interior]
    pull = float(np.sum(g_u * np.conj(phi_int)).real)   # d(alpha)/dphi* coupling
    g_phi = np.zeros_like(phi_k)
    g_phi[1:-1] = alpha * (g_u - (pull / new_mass) * phi_int)
    return value, g_phi, psi_new


def local_cost(theta_k, psi_current, layout: SubdomainLayout, k: int, prob: ProblemSpec,
               local_spec: AnsatzSpec) -> float:
    """Full-grid energy of embed(psi_current, ansatz_state(theta_k), k)."""
    phi = ansatz_state(local_spec, theta_k)
    value, _, _ = _embedded_energy_and_gradient(
        np.asarray(psi_current, dtype=np.complex128), phi, layout.subdomain(k), prob
    )
    return value


def local_cost_gradient(theta_k, psi_current, layout: SubdomainLayout, k: int,
                        prob: ProblemSpec, local_spec: AnsatzSpec) -> np.ndarray:
    """d(local_cost)/dtheta_k via the embedding chain rule and adjoint sweep."""
    _, grad = _local_objective(
        np.asarray(psi_current, dtype=np.complex128), layout, k, prob, local_spec
    )(np.asarray(theta_k, dtype=float))
    return grad


def _local_objective(psi_current, layout, k, prob, local_spec):
    sub = layout.subdomain(k)

    def objective(theta):
        phi = ansatz_state(local_spec, theta)
        value, g_phi, _ = _embedded_energy_and_gradient(psi_current, phi, sub, prob)
        grad = cost_gradient_through_circuit(local_spec, theta, g_phi, state=phi)
        return value, grad

    return objective


def _classical_objective(psi_current, layout, k, prob):
    """Local cost over the raw run values v (real parameter vector [Re; Im]).

    Boundary entries ride along in v but are ignored by the embedding, so
    their gradient is zero and they never move.  Because the embedding
    rescales interior mass, Euclidean normalization of v cancels out and
    the update starts exactly at the current state.
    """
    sub = layout.subdomain(k)
    L = sub.indices.size

    def objective(x):
        v = x[:L] + 1j * x[L:]
        value, g_phi, _ = _embedded_energy_and_gradient(psi_current, v, sub, prob)
        return value, np.concatenate([g_phi.real, g_phi.imag])

    return objective


@dataclass(frozen=True)
class DdSchedule:
    """Sweep count and per-subdomain iteration budget (int or "converge")."""

    sweeps: int
    budget: int | str = 50

    def __post_init__(self):
        if self.sweeps < 0:
            raise ConfigurationError(f"sweep count must be >= 0, got {self.sweeps}")
        if isinstance(self.budget, str):
            if self.budget != CONVERGE:
                raise ConfigurationError(f"budget must be an integer or '{CONVERGE}'")
        elif self.budget < 0:
            raise ConfigurationError(f"budget must be >= 0, got {self.budget}")

    def optimizer_config(self) -> OptimizerConfig:
        iters = _CONVERGE_CAP if self.budget == CONVERGE else int(self.budget)
        return OptimizerConfig(max_iters=iters, grad_tol=1e-20)


def _sweep_driver(prob, reference, layout, schedule, update_subdomain,
                  record_walltime, state_hook):
    """Shared sweep loop: sequential subdomain updates with trace recording."""
    psi = constant_state(prob.grid)
    trace = TrainingTrace()
    psi_ref = reference.psi.astype(np.complex128) if reference is not None else None
    start = time.perf_counter()

    def recorder(sweep, k, candidate_of):
        def callback(_it, params, f, grad_norm):
            step = trace.rows[-1].step + 1 if trace.rows else 0
            prev = trace.rows[-1].energy if trace.rows else None
            rel = abs(f - prev) / abs(prev) if prev is not None and prev != 0.0 else np.nan
            if reference is not None:
                err = abs(f - reference.energy)
                l2 = l2_error(candidate_of(params), psi_ref)
            else:
                err = np.nan
                l2 = np.nan
            trace.append(
                TraceRow(
                    step=step,
                    sweep=sweep,
                    subdomain=k,
                    energy=f,
                    energy_error=err,
                    l2_error=l2,
                    rel_energy_change=rel,
                    grad_norm=grad_norm,
                    wall_time_s=time.perf_counter() - start if record_walltime else 0.0,
                )
            )

        return callback

    trace.meta["terminations"] = []
    budget = schedule.budget
    for sweep in range(schedule.sweeps):
        for k in (1, 2, 3):
            if budget == 0:
                continue
            psi, termination = update_subdomain(psi, sweep, k, recorder)
            trace.meta["terminations"].append(termination)
            if state_hook is not None:
                state_hook(psi)
    return psi, trace


def run_dd(
    prob: ProblemSpec,
    layout: SubdomainLayout,
    local_spec: AnsatzSpec,
    schedule: DdSchedule,
    warm_start: bool = True,
    reference: NewtonResult | None = None,
    record_walltime: bool = False,
    state_hook=None,
) -> tuple[np.ndarray, TrainingTrace]:
    """Sequential subdomain optimization with norm-preserving embedding.

    Starts from the uniform constant state with all-ones local parameters.
    Each subdomain update minimizes the local cost under the schedule's
    budget and splices the optimized local state into the global
    wavefunction.  With ``warm_start`` each subdomain reuses its parameters
    from the previous sweep (there is no inverse map from grid values to
    circuit parameters); otherwise parameters reset to all-ones every
    update.  ``state_hook(psi)`` fires after every embedding.
    """
    if local_spec.n != layout.n - 1:
        raise DimensionError(
            f"local ansatz must act on n-1 = {layout.n - 1} qubits, got {local_spec.n}"
        )
    opt_config = schedule.optimizer_config() if schedule.budget != 0 else None
    thetas = [initial_parameters(local_spec) for _ in range(3)]

    def update(psi, sweep, k, recorder):
        if not warm_start:
            thetas[k - 1] = initial_parameters(local_spec)

        def candidate_of(theta):
            return embed(psi, ansatz_state(local_spec, theta), layout, k)

        result = minimize(
            _local_objective(psi, layout, k, prob, local_spec),
            thetas[k - 1],
            opt_config,
            callback=recorder(sweep, k, candidate_of),
        )
        thetas[k - 1] = result.theta
        return embed(psi, ansatz_state(local_spec, result.theta), layout, k), result.termination

    return _sweep_driver(prob, reference, layout, schedule, update, record_walltime, state_hook)


def run_classical_dd(
    prob: ProblemSpec,
    layout: SubdomainLayout,
    schedule: DdSchedule,
    reference: NewtonResult | None = None,
    record_walltime: bool = False,
    state_hook=None,
) -> tuple[np.ndarray, TrainingTrace]:
    """Classical baseline: same sweep protocol, raw interior values as unknowns.

    Each update optimizes the run's complex grid values directly (boundary
    entries are carried but overwritten by the embedding), starting from
    the current iterate.  The start point reproduces the current state
    exactly, so the global energy is non-increasing at every accepted
    local iteration.
    """

    def update(psi, sweep, k, recorder):
        sub = layout.subdomain(k)
        L = sub.indices.size
        x0 = np.concatenate([psi[sub.indices].real, psi[sub.indices].imag])

        def candidate_of(x):
            v = x[:L] + 1j * x[L:]
            return embed(psi, v / np.linalg.norm(v), layout, k)

        result = minimize(
            _classical_objective(psi, layout, k, prob),
            x0,
            schedule.optimizer_config(),
            callback=recorder(sweep, k, candidate_of),
        )
        return candidate_of(result.theta), result.termination

    return _sweep_driver(prob, reference, layout, schedule, update, record_walltime, state_hook)

"""Exact state-vector simulation of the layered Rx/Rz + CNOT-ring ansatz.

A state vector is a unit-norm complex vector of length 2**n; qubit 0 is
the least significant bit of the amplitude index, and amplitude index j
corresponds to grid node x_j.  Rotation convention: Rx(t) = exp(-i*t*X/2),
Rz(t) = exp(-i*t*Z/2).  Each entangling layer applies Rx then Rz on every
qubit, then the ring CNOT(0->1), ..., CNOT(n-2->n-1), CNOT(n-1->0); the
final layer is rotations only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .backend import kernels
from .exceptions import ConfigurationError, DimensionError


@dataclass(frozen=True)
class AnsatzSpec:
    """Circuit shape: ``depth`` entangling layers on ``n`` qubits."""

    n: int
    depth: int

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"ansatz needs at least 1 qubit, got n={self.n}")
        if self.depth < 0:
            raise ConfigurationError(f"ansatz depth must be >= 0, got {self.depth}")

    @property
    def num_parameters(self) -> int:
        return 2 * self.n * (self.depth + 1)


def initial_parameters(spec: AnsatzSpec, value: float = 1.0) -> np.ndarray:
    """Constant parameter vector theta_i = value (the training start point)."""
    return np.full(spec.num_parameters, float(value))


def cnot_ring(n: int) -> list[tuple[int, int]]:
    """(control, target) pairs of one entangling block; empty for n = 1."""
    if n < 2:
        return []
    return [(q, q + 1) for q in range(n - 1)] + [(n - 1, 0)]


def gate_sequence(spec: AnsatzSpec) -> Iterator[tuple]:
    """Gates in application order: ('rx'|'rz', qubit, theta_index) or ('cnot', c, t)."""
    for layer in range(spec.depth + 1):
        base = 2 * spec.n * layer
        for q in range(spec.n):
            yield ("rx", q, base + 2 * q)
            yield ("rz", q, base + 2 * q + 1)
        if layer < spec.depth:
            for c, t in cnot_ring(spec.n):
                yield ("cnot", c, t)


def _as_state(state) -> np.ndarray:
    arr = np.array(state, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 2 or arr.size & (arr.size - 1):
        raise DimensionError(f"state length must be a power of two >= 2, got shape {arr.shape}")
    return arr


def _check_qubit(num_amps: int, qubit: int) -> None:
    n = num_amps.bit_length() - 1
    if not 0 <= qubit < n:
        raise DimensionError(f"qubit index {qubit} out of range for {n} qubits")


def apply_rx(state, qubit: int, angle: float) -> np.ndarray:
    """Return exp(-i*angle*X/2) applied to ``qubit`` of ``state``."""
    out = _as_state(state)
    _check_qubit(out.size, qubit)
    kernels.apply_rx(out, qubit, float(angle))
    return out


def apply_rz(state, qubit: int, angle: float) -> np.ndarray:
    """Return exp(-i*angle*Z/2) applied to ``qubit`` of ``state``."""
    out = _as_state(state)
    _check_qubit(out.size, qubit)
    kernels.apply_rz(out, qubit, float(angle))
    return out


def apply_cnot(state, control: int, target: int) -> np.ndarray:
    """Return CNOT(control -> target) applied to ``state``."""
    out = _as_state(state)
    _check_qubit(out.size, control)
    _check_qubit(out.size, target)
    if control == target:
        raise DimensionError("CNOT control and target must differ")
    kernels.apply_cnot(out, control, target)
    return out


def _check_theta(spec: AnsatzSpec, theta) -> np.ndarray:
    theta = np.ascontiguousarray(theta, dtype=float)
    if theta.shape != (spec.num_parameters,):
        raise DimensionError(
            f"theta has shape {theta.shape}, ansatz (n={spec.n}, depth={spec.depth}) "
            f"needs {spec.num_parameters} parameters"
        )
    return theta


def ansatz_state(spec: AnsatzSpec, theta) -> np.ndarray:
    """Output state U(theta)|0...0> of the hardware-efficient ansatz."""
    theta = _check_theta(spec, theta)
    return kernels.ansatz_forward(spec.n, spec.depth, theta)


def cost_gradient_through_circuit(
    spec: AnsatzSpec, theta, state_cost_gradient, state: np.ndarray | None = None
) -> np.ndarray:
    """dC/dtheta for a real cost C of the output state, by reverse sweep.

    ``state_cost_gradient`` must be 2*dC/dphi* at phi = ansatz_state(theta)
    (Wirtinger convention; supplied by the caller via the chain rule).
    Optionally pass the already-computed output ``state`` to skip one
    forward evaluation; total cost stays within a small constant multiple
    of a single forward pass.
    """
    theta = _check_theta(spec, theta)
    lam = np.ascontiguousarray(state_cost_gradient, dtype=np.complex128)
    if lam.shape != (1 << spec.n,):
        raise DimensionError(
            f"state cost gradient has shape {lam.shape}, expected ({1 << spec.n},)"
        )
    if state is None:
        state = kernels.ansatz_forward(spec.n, spec.depth, theta)
    return kernels.ansatz_backward(spec.n, spec.depth, theta, state, lam)

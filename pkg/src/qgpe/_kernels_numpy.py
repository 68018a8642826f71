"""Pure-numpy state-vector kernels (fallback backend).

Same call surface as ``_kernels_numba``.  Amplitude index bit q is qubit q
(qubit 0 = least significant bit).  The single-gate functions mutate
``state`` in place; the full-circuit passes allocate their outputs.

Parameter layout: layer-major, qubit-major inside a layer, (theta_x,
theta_z) per qubit, so theta[2*(n*layer + q)] is the Rx angle of qubit q
in rotation layer ``layer``.
"""

import numpy as np


def apply_rx(state, qubit, angle):
    """exp(-i*angle*X/2) on one qubit, in place."""
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    v = state.reshape(-1, 2, 1 << qubit)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :].copy()
    v[:, 0, :] = c * a0 - 1j * s * a1
    v[:, 1, :] = c * a1 - 1j * s * a0


def apply_rz(state, qubit, angle):
    """exp(-i*angle*Z/2) on one qubit, in place."""
    phase = np.exp(-0.5j * angle)
    v = state.reshape(-1, 2, 1 << qubit)
    v[:, 0, :] *= phase
    v[:, 1, :] *= np.conj(phase)


def apply_cnot(state, control, target):
    """Flip the target bit where the control bit is set, in place."""
    b1, b0 = max(control, target), min(control, target)
    v = state.reshape(-1, 2, (1 << b1) >> (b0 + 1), 2, 1 << b0)
    if control == b1:
        sub = v[:, 1]
        tmp = sub[:, :, 0, :].copy()
        sub[:, :, 0, :] = sub[:, :, 1, :]
        sub[:, :, 1, :] = tmp
    else:
        sub = v[:, :, :, 1, :]
        tmp = sub[:, 0].copy()
        sub[:, 0] = sub[:, 1]
        sub[:, 1] = tmp


def _rx_derivative(psi, lam, qubit):
    # Re( lam^dag (-i X/2) psi ) accumulated over all pairs of the qubit.
    p = psi.reshape(-1, 2, 1 << qubit)
    l = lam.reshape(-1, 2, 1 << qubit)
    cross = np.sum(np.conj(l[:, 0, :]) * p[:, 1, :] + np.conj(l[:, 1, :]) * p[:, 0, :])
    return 0.5 * float(cross.imag)


def _rz_derivative(psi, lam, qubit):
    # Re( lam^dag (-i Z/2) psi )
    p = psi.reshape(-1, 2, 1 << qubit)
    l = lam.reshape(-1, 2, 1 << qubit)
    diag = np.sum(np.conj(l[:, 0, :]) * p[:, 0, :]) - np.sum(np.conj(l[:, 1, :]) * p[:, 1, :])
    return 0.5 * float(diag.imag)


def ansatz_forward(n, depth, theta):
    """State produced by the layered Rx/Rz + CNOT-ring circuit from |0...0>."""
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    for layer in range(depth + 1):
        base = 2 * n * layer
        for q in range(n):
            apply_rx(state, q, theta[base + 2 * q])
            apply_rz(state, q, theta[base + 2 * q + 1])
        if layer < depth and n >= 2:
            for q in range(n - 1):
                apply_cnot(state, q, q + 1)
            apply_cnot(state, n - 1, 0)
    return state


def ansatz_backward(n, depth, theta, phi_out, cost_grad):
    """Adjoint sweep: d(cost)/d(theta) from the output-state cost gradient.

    ``phi_out`` is the forward output for ``theta`` and ``cost_grad`` is
    2 * dC/dphi* there.  Walks the gates in reverse, undoing each one on
    both the state and the adjoint vector; each rotation contributes
    Re( lam^dag (-i G/2) psi ) evaluated just after the gate.
    """
    psi = phi_out.copy()
    lam = np.asarray(cost_grad, dtype=np.complex128).copy()
    grad = np.zeros(theta.size)
    for layer in range(depth, -1, -1):
        if layer < depth and n >= 2:
            apply_cnot(psi, n - 1, 0)
            apply_cnot(lam, n - 1, 0)
            for q in range(n - 2, -1, -1):
                apply_cnot(psi, q, q + 1)
                apply_cnot(lam, q, q + 1)
        base = 2 * n * layer
        for q in range(n - 1, -1, -1):
            iz = base + 2 * q + 1
            grad[iz] = _rz_derivative(psi, lam, q)
            apply_rz(psi, q, -theta[iz])
            apply_rz(lam, q, -theta[iz])
            ix = base + 2 * q
            grad[ix] = _rx_derivative(psi, lam, q)
            apply_rx(psi, q, -theta[ix])
            apply_rx(lam, q, -theta[ix])
    return grad

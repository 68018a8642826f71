"""Numba-jitted state-vector kernels (default backend).

Same call surface and conventions as ``_kernels_numpy``; see that module
for the parameter layout.  The full forward/adjoint passes run entirely
inside nopython mode so per-gate dispatch costs nothing.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_rx(state, qubit, angle):
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    bit = 1 << qubit
    low = bit - 1
    for i in range(state.size >> 1):
        i0 = ((i >> qubit) << (qubit + 1)) | (i & low)
        i1 = i0 | bit
        a0 = state[i0]
        a1 = state[i1]
        state[i0] = c * a0 - 1j * s * a1
        state[i1] = c * a1 - 1j * s * a0


@njit(cache=True)
def apply_rz(state, qubit, angle):
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    phase0 = complex(c, -s)
    phase1 = complex(c, s)
    bit = 1 << qubit
    low = bit - 1
    for i in range(state.size >> 1):
        i0 = ((i >> qubit) << (qubit + 1)) | (i & low)
        i1 = i0 | bit
        state[i0] *= phase0
        state[i1] *= phase1


@njit(cache=True)
def apply_cnot(state, control, target):
    cbit = 1 << control
    tbit = 1 << target
    for i in range(state.size):
        if (i & cbit) != 0 and (i & tbit) == 0:
            j = i | tbit
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp


@njit(cache=True)
def _rx_derivative(psi, lam, qubit):
    bit = 1 << qubit
    low = bit - 1
    acc = 0.0
    for i in range(psi.size >> 1):
        i0 = ((i >> qubit) << (qubit + 1)) | (i & low)
        i1 = i0 | bit
        acc += (np.conj(lam[i0]) * psi[i1] + np.conj(lam[i1]) * psi[i0]).imag
    return 0.5 * acc


@njit(cache=True)
def _rz_derivative(psi, lam, qubit):
    bit = 1 << qubit
    low = bit - 1
    acc = 0.0
    for i in range(psi.size >> 1):
        i0 = ((i >> qubit) << (qubit + 1)) | (i & low)
        i1 = i0 | bit
        acc += (np.conj(lam[i0]) * psi[i0]).imag - (np.conj(lam[i1]) * psi[i1]).imag
    return 0.5 * acc


@njit(cache=True)
def ansatz_forward(n, depth, theta):
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


@njit(cache=True)
def ansatz_backward(n, depth, theta, phi_out, cost_grad):
    psi = phi_out.copy()
    lam = cost_grad.copy()
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

"""Periodic Fourier grid, potential sampling, and the discrete GPE energy.

The domain is the torus [0, 2*pi) discretized with N = 2**n uniform nodes,
so a grid function can be carried by an n-qubit amplitude vector.  A
wavefunction is a complex vector psi of length N with the physical
normalization dx * sum |psi_j|**2 = 1.

Conventions fixed here and relied on everywhere else:

* DFT coefficients are psi_hat[l] = (1/N) * sum_j psi[j] * exp(-i*l*x_j),
  i.e. ``np.fft.fft(psi) / N``.
* FFT bin k carries the integer frequency k for k <= N/2 and k - N above;
  the Nyquist bin is assigned +N/2.  Its kinetic weight is (N/2)**2 like
  every other mode (the sqrt(2) cosine factor of the Fourier interpolant
  only affects interpolation, never the quadratic kinetic sum).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DimensionError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid with ``N = 2**n`` nodes ``x_j = j*dx``."""

    n: int
    N: int
    dx: float
    nodes: np.ndarray
    freqs: np.ndarray      # integer frequency of each FFT bin, Nyquist -> +N/2
    freqs_sq: np.ndarray   # freqs**2 as float, precomputed for hot loops


@dataclass(frozen=True)
class ProblemSpec:
    """Grid plus sampled external potential and interaction strength kappa."""

    grid: GridSpec
    potential_samples: np.ndarray
    kappa: float

    def __post_init__(self):
        v = np.asarray(self.potential_samples, dtype=float)
        if v.shape != (self.grid.N,):
            raise DimensionError(
                f"potential has {v.shape} samples, grid has {self.grid.N} nodes"
            )
        if not np.all(np.isfinite(v)):
            raise ConfigurationError("potential samples must all be finite")
        object.__setattr__(self, "potential_samples", v)


def make_grid(n: int) -> GridSpec:
    """Build the n-qubit grid.  Supported range is 2 <= n <= 14."""
    if not 2 <= int(n) <= 14:
        raise ConfigurationError(f"qubit count n={n} outside supported range [2, 14]")
    n = int(n)
    N = 1 << n
    dx = TWO_PI / N
    freqs = np.fft.fftfreq(N, d=1.0 / N).astype(np.int64)
    freqs[N // 2] = N // 2
    return GridSpec(
        n=n,
        N=N,
        dx=dx,
        nodes=dx * np.arange(N),
        freqs=freqs,
        freqs_sq=freqs.astype(float) ** 2,
    )


def sample_default_potential(grid: GridSpec) -> np.ndarray:
    """Sample V(x) = 1 - cos(x) at the grid nodes."""
    return 1.0 - np.cos(grid.nodes)


def default_problem(n: int, kappa: float = 1.0) -> ProblemSpec:
    """Grid plus the default 1 - cos(x) potential."""
    grid = make_grid(n)
    return ProblemSpec(grid=grid, potential_samples=sample_default_potential(grid), kappa=float(kappa))


def constant_state(grid: GridSpec) -> np.ndarray:
    """The uniform normalized state psi_j = 1/sqrt(2*pi)."""
    return np.full(grid.N, 1.0 / np.sqrt(TWO_PI), dtype=np.complex128)


def norm_squared(psi: np.ndarray, grid: GridSpec) -> float:
    """Physical norm dx * sum |psi_j|**2."""
    return float(grid.dx * np.sum(np.abs(psi) ** 2))


def _check_state(psi, N: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (N,):
        raise DimensionError(f"state has shape {psi.shape}, expected ({N},)")
    return psi


def energy(psi: np.ndarray, prob: ProblemSpec) -> float:
    """Discrete GPE energy: spectral kinetic + quadrature potential/interaction.

    E = pi * sum_l l^2 |psi_hat_l|^2 + dx * sum_j V_j |psi_j|^2
        + (kappa*dx/2) * sum_j |psi_j|^4
    evaluated as written; psi need not be normalized.
    """
    g = prob.grid
    psi = _check_state(psi, g.N)
    psi_hat = np.fft.fft(psi)
    density = psi.real**2 + psi.imag**2
    kinetic = np.pi * float(g.freqs_sq @ (psi_hat.real**2 + psi_hat.imag**2)) / g.N**2
    potential = g.dx * float(prob.potential_samples @ density)
    interaction = 0.5 * prob.kappa * g.dx * float(density @ density)
    return kinetic + potential + interaction


def apply_hamiltonian(psi: np.ndarray, prob: ProblemSpec) -> np.ndarray:
    """Linear part H psi = -psi''/2 + V psi via the spectral multiplier l^2/2."""
    g = prob.grid
    psi = _check_state(psi, g.N)
    kinetic = np.fft.ifft(0.5 * g.freqs_sq * np.fft.fft(psi))
    return kinetic + prob.potential_samples * psi


def energy_gradient(psi: np.ndarray, prob: ProblemSpec) -> np.ndarray:
    """Wirtinger gradient g = 2 dE/dpsi* = 2*dx*(H psi + kappa |psi|^2 psi).

    For any perturbation delta, d/dt E(psi + t*delta) at t=0 equals
    Re sum_j conj(g_j) delta_j.
    """
    _, grad = energy_and_gradient(psi, prob)
    return grad


def energy_and_gradient(psi: np.ndarray, prob: ProblemSpec) -> tuple[float, np.ndarray]:
    """Energy and its Wirtinger gradient sharing one FFT of psi."""
    g = prob.grid
    psi = _check_state(psi, g.N)
    psi_hat = np.fft.fft(psi)
    density = psi.real**2 + psi.imag**2
    kinetic = np.pi * float(g.freqs_sq @ (psi_hat.real**2 + psi_hat.imag**2)) / g.N**2
    potential = g.dx * float(prob.potential_samples @ density)
    interaction = 0.5 * prob.kappa * g.dx * float(density @ density)
    h_psi = np.fft.ifft(0.5 * g.freqs_sq * psi_hat) + prob.potential_samples * psi
    grad = 2.0 * g.dx * (h_psi + prob.kappa * density * psi)
    return kinetic + potential + interaction, grad


def l2_error(psi: np.ndarray, ref: np.ndarray) -> float:
    """min over gamma of || psi - exp(i*gamma) * ref ||_2 on raw grid values.

    Ground states are only defined up to a global phase, so the error is
    reported after optimal phase alignment.  No dx weighting.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    ref = np.asarray(ref, dtype=np.complex128)
    if psi.shape != ref.shape:
        raise DimensionError(f"shape mismatch: {psi.shape} vs {ref.shape}")
    d2 = (
        float(np.vdot(psi, psi).real)
        + float(np.vdot(ref, ref).real)
        - 2.0 * abs(np.vdot(ref, psi))
    )
    return float(np.sqrt(max(d2, 0.0)))

"""Pauli-string algebra, dynamical-Lie-algebra closure, and a variance probe.

Pauli strings are stored symplectically as two n-bit masks (X part, Z
part; bit j = qubit j), with global phases dropped throughout: distinct
nonidentity strings are orthogonal under the trace inner product, so the
closure dimension is just the count of distinct strings reached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import AnsatzSpec, cnot_ring
from .exceptions import ConfigurationError, DimensionError
from .global_vqa import GlobalVqaProblem, global_cost
from .grid import ProblemSpec


@dataclass(frozen=True)
class PauliString:
    """Nonidentity n-qubit Pauli string, phase ignored."""

    n: int
    x: int   # X-part bitmask
    z: int   # Z-part bitmask

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n < 1 or (self.x | self.z) & ~mask:
            raise DimensionError(f"bitmasks exceed {self.n} qubits: x={self.x:b}, z={self.z:b}")
        if self.x == 0 and self.z == 0:
            raise ConfigurationError("the identity string is not a valid basis element")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a string like 'XIZ'; character j acts on qubit j."""
        x = z = 0
        for j, ch in enumerate(label):
            if ch in "XY":
                x |= 1 << j
            if ch in "ZY":
                z |= 1 << j
            if ch not in "IXYZ":
                raise ConfigurationError(f"invalid Pauli letter {ch!r}")
        return cls(n=len(label), x=x, z=z)

    def label(self) -> str:
        return "".join(
            "IXZY"[((self.x >> j) & 1) + 2 * ((self.z >> j) & 1)] for j in range(self.n)
        )


@dataclass(frozen=True)
class DlaReport:
    n: int
    generator_count: int
    closure_dimension: int
    closed_after_rounds: int


def _parity(mask: int) -> int:
    return mask.bit_count() & 1


def pauli_commutator(p: PauliString, q: PauliString) -> PauliString | None:
    """None if p and q commute, else their product string (phase dropped).

    Commutation is the binary symplectic form <p, q> = sum(x_p & z_q) +
    sum(z_p & x_q) mod 2; anticommuting strings have [p, q] proportional
    to the XOR-product string.
    """
    if p.n != q.n:
        raise DimensionError(f"qubit counts differ: {p.n} vs {q.n}")
    if _parity(p.x & q.z) ^ _parity(p.z & q.x) == 0:
        return None
    return PauliString(n=p.n, x=p.x ^ q.x, z=p.z ^ q.z)


def cnot_conjugate(p: PauliString, control: int, target: int) -> PauliString:
    """Image of p under conjugation by CNOT(control -> target), phase dropped.

    X on the control gains X on the target; Z on the target gains Z on the
    control.  The update is an involution.
    """
    if control == target:
        raise DimensionError("CNOT control and target must differ")
    for idx in (control, target):
        if not 0 <= idx < p.n:
            raise DimensionError(f"qubit index {idx} out of range for n={p.n}")
    x, z = p.x, p.z
    if (x >> control) & 1:
        x ^= 1 << target
    if (z >> target) & 1:
        z ^= 1 << control
    return PauliString(n=p.n, x=x, z=z)


def ansatz_generators(n: int) -> list[PauliString]:
    """Rotation generators X_j, Z_j plus their CNOT-ring conjugations.

    The ring is conjugated gate by gate in circuit order; duplicates are
    removed while preserving first-seen order.
    """
    if n < 2:
        raise ConfigurationError(f"generators need n >= 2, got n={n}")
    ring = cnot_ring(n)
    seen: dict[PauliString, None] = {}
    for j in range(n):
        for p in (PauliString(n=n, x=1 << j, z=0), PauliString(n=n, x=0, z=1 << j)):
            seen.setdefault(p)
            conj = p
            for c, t in ring:
                conj = cnot_conjugate(conj, c, t)
            seen.setdefault(conj)
    return list(seen)


def lie_closure(generators) -> DlaReport:
    """Close a generator set under commutators (worklist over a hash set).

    Each round commutes the previous round's new strings against the
    accumulated basis; terminates once a round adds nothing.  Since
    distinct Pauli strings are linearly independent, the basis cardinality
    is the Lie-algebra dimension.
    """
    generators = list(generators)
    if not generators:
        raise ConfigurationError("generator set must be nonempty")
    n = generators[0].n
    basis: dict[PauliString, None] = {}
    for p in generators:
        if p.n != n:
            raise DimensionError("generators act on differing qubit counts")
        basis.setdefault(p)

    frontier = list(basis)
    rounds = 0
    while frontier:
        fresh: dict[PauliString, None] = {}
        for p in frontier:
            for q in list(basis):
                c = pauli_commutator(p, q)
                if c is not None and c not in basis and c not in fresh:
                    fresh.setdefault(c)
        if not fresh:
            break
        rounds += 1
        basis.update(fresh)
        frontier = list(fresh)
    return DlaReport(
        n=n,
        generator_count=len(generators),
        closure_dimension=len(basis),
        closed_after_rounds=rounds,
    )


def subdomain_dla_ratio(n: int) -> float:
    """dim(closure at n) / dim(closure at n-1) for the ring ansatz."""
    if not 3 <= n <= 6:
        raise ConfigurationError(f"closure ratio supported for 3 <= n <= 6, got n={n}")
    full = lie_closure(ansatz_generators(n)).closure_dimension
    local = lie_closure(ansatz_generators(n - 1)).closure_dimension
    return full / local


def sample_cost_variance(
    n: int, d: int, num_samples: int, seed: int, prob: ProblemSpec
) -> tuple[float, float]:
    """Monte-Carlo concentration probe of the global cost landscape.

    Parameters are drawn uniformly from [0, 2*pi)^m with a seeded
    generator (sample i uses row i of one pre-drawn matrix, so results do
    not depend on evaluation order).  Returns the sample mean of the cost
    and the unbiased sample variance of the mean-rescaled cost C/mean(C).

    The rescaling makes the probe scale-free: the raw cost of a random
    state grows like 4**n with the grid (the kinetic scale of the energy),
    which would swamp the concentration effect.  A shrinking rescaled
    variance with growing n is the empirical barren-plateau signature.
    """
    if num_samples < 2:
        raise ConfigurationError(f"need at least 2 samples, got {num_samples}")
    spec = AnsatzSpec(n=n, depth=d)
    problem = GlobalVqaProblem(prob=prob, ansatz=spec)
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=(num_samples, spec.num_parameters))
    values = np.array([global_cost(problem, thetas[i]) for i in range(num_samples)])
    mean = float(values.mean())
    return mean, float((values / mean).var(ddof=1))

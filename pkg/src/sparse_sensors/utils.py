"""Shared helpers: seeded random streams, input validation, RMSE, warnings."""

import warnings

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyMatrix,
    IndexOutOfRange,
    NonFiniteInput,
    SensorWarning,
)

__all__ = [
    "RNG_ALGORITHM",
    "SeededRng",
    "as_matrix",
    "as_vector",
    "is_permutation",
    "rmse",
    "shuffled_complement",
    "warn",
]

RNG_ALGORITHM = "pcg64-raw/box-muller-53"

_TWO_POW_53 = float(2**53)


class SeededRng:
    """Deterministic random stream built only on raw PCG64 output.

    Uniforms take the top 53 bits of each raw 64-bit word; normals come from
    the Box-Muller transform of consecutive uniform pairs; bounded integers use
    the multiply-shift map ``(raw * bound) >> 64``. None of these go through
    numpy's distribution samplers, whose streams are allowed to change between
    numpy releases, so a seed gives the same numbers across versions.

    A stream must not be shared between threads mid-draw; use :meth:`spawn`
    to hand each worker its own independent substream.
    """

    algorithm = RNG_ALGORITHM

    def __init__(self, seed=0):
        self._seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
        self._bits = np.random.PCG64(self._seed_seq)

    def spawn(self, n_children=1):
        return [SeededRng(child) for child in self._seed_seq.spawn(n_children)]

    def raw(self, size):
        return np.asarray(self._bits.random_raw(size), dtype=np.uint64).reshape(size)

    def uniform(self, size):
        """Doubles in [0, 1)."""
        return (self.raw(size) >> np.uint64(11)).astype(np.float64) / _TWO_POW_53

    def standard_normal(self, size):
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape))
        half = (count + 1) // 2
        u1 = 1.0 - self.uniform(half)  # (0, 1], keeps log finite
        u2 = self.uniform(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        z = np.empty(2 * half)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:count].reshape(shape)

    def below(self, bound):
        """One integer uniformly drawn from ``[0, bound)``."""
        word = int(self.raw(1)[0])
        return (word * int(bound)) >> 64


def shuffled_complement(all_n, chosen, rng):
    """Indices of ``range(all_n)`` not in ``chosen``, in Fisher-Yates order."""
    chosen = [int(i) for i in chosen]
    for i in chosen:
        if i < 0 or i >= all_n:
            raise IndexOutOfRange(f"index {i} outside [0, {all_n})")
    mask = np.ones(all_n, dtype=bool)
    mask[chosen] = False
    rest = np.flatnonzero(mask)
    for i in range(len(rest) - 1, 0, -1):
        j = rng.below(i + 1)
        rest[i], rest[j] = rest[j], rest[i]
    return rest


def rmse(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    if a.size == 0:
        return 0.0
    return float(np.sqrt(np.mean((a - b) ** 2)))


def as_matrix(A, name="matrix"):
    """Validate and return ``A`` as a finite 2-D float array (a copy is not
    forced)."""
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got {A.ndim}-D")
    if A.size == 0:
        raise EmptyMatrix(f"{name} is empty (shape {A.shape})")
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return A


def as_vector(v, name="vector"):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return v


def is_permutation(order, n):
    order = np.asarray(order)
    return order.shape == (n,) and np.array_equal(np.sort(order), np.arange(n))


def warn(message):
    warnings.warn(message, SensorWarning, stacklevel=3)

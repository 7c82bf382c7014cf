"""Walsh-Hadamard matrix semantics.

The matrix is the unnormalized Sylvester (natural-ordered) one:
``H_1 = (1)`` and ``H_{2n} = [[H_n, H_n], [H_n, -H_n]]``, equivalently
``H[j, l] = (-1)**popcount(j AND l)`` with 0-based indices.  H is symmetric
and ``H @ H == d * I``.  The fast transform computes ``H @ x`` in place and
leaves every ``1/sqrt(d)`` or ``1/d`` normalization to callers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractViolationError, OracleTooLargeError

NAIVE_GUARD = 4096


@dataclass(frozen=True)
class Dimension:
    """A power-of-two ambient dimension ``d = 2**log2d``."""

    d: int
    log2d: int = field(init=False)

    def __post_init__(self) -> None:
        d = self.d
        if not isinstance(d, int) or d < 1 or (d & (d - 1)) != 0:
            raise ContractViolationError(f"dimension must be a positive power of two, got {d!r}")
        object.__setattr__(self, "log2d", d.bit_length() - 1)


@dataclass(frozen=True, eq=False)
class SignVector:
    """A vector with entries exactly +-1, one per coordinate."""

    signs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.signs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ContractViolationError("signs must be a nonempty 1-D array")
        if not np.all(np.abs(arr) == 1.0):
            raise ContractViolationError("sign entries must be exactly +1 or -1")
        object.__setattr__(self, "signs", arr)

    def __len__(self) -> int:
        return self.signs.shape[0]


def _check_vector(x: np.ndarray, dim: Dimension) -> np.ndarray:
    if not isinstance(x, np.ndarray) or x.dtype != np.float64 or x.ndim != 1:
        raise ContractViolationError("expected a 1-D float64 numpy array")
    if x.shape[0] != dim.d:
        raise ContractViolationError(f"vector length {x.shape[0]} does not match d={dim.d}")
    return x


def fwht_in_place(x: np.ndarray, dim: Dimension) -> np.ndarray:
    """Overwrite ``x`` with ``H @ x`` and return it.

    Theta(d log d) iterative butterflies; ``x`` must be a contiguous
    float64 array of length ``dim.d``.
    """
    _check_vector(x, dim)
    if not x.flags.c_contiguous:
        raise ContractViolationError("fwht_in_place requires a C-contiguous buffer")
    _kernels.fwht_1d(x)
    return x


def naive_hadamard_multiply(x: np.ndarray, dim: Dimension) -> np.ndarray:
    """Reference ``H @ x`` via the explicit entry formula, O(d^2).

    Kept as the independent oracle for the fast transform; guarded so a
    misconfigured experiment cannot silently fall into quadratic work.
    """
    _check_vector(x, dim)
    if dim.d > NAIVE_GUARD:
        raise OracleTooLargeError(
            f"naive multiply is capped at d={NAIVE_GUARD}, got d={dim.d}"
        )
    return hadamard_matrix(dim).astype(np.float64) @ x


def hadamard_matrix(dim: Dimension) -> np.ndarray:
    """The full +-1 integer matrix from the popcount formula (guarded size)."""
    if dim.d > NAIVE_GUARD:
        raise OracleTooLargeError(
            f"explicit matrix is capped at d={NAIVE_GUARD}, got d={dim.d}"
        )
    idx = np.arange(dim.d, dtype=np.uint32)
    pc = np.bitwise_count(np.bitwise_and.outer(idx, idx))
    return np.where(pc & 1, -1, 1).astype(np.int64)


def apply_sign_diagonal(x: np.ndarray, s: SignVector) -> np.ndarray:
    """Componentwise product ``s * x`` (an involution)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != len(s):
        raise ContractViolationError(
            f"length mismatch: vector has {x.shape}, signs have {len(s)}"
        )
    return s.signs * x

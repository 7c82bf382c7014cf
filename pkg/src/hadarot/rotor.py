"""The random objects under study.

The two-block transform sends a unit vector u to
``T(u) = (1/d) H D1 H D2 u`` where D1, D2 are independent diagonal
Rademacher matrices; the one-block variant ``(1/sqrt d) H D u`` is kept
to exhibit its degenerate two-point support at u = e1.  Alongside live the
exact uniform-sphere sampler, the scaled hypercube ``{+-1/sqrt d}^d`` with
its nearest-vertex map and distance function, and chunked batch samplers
that drive the Monte Carlo layer.

Gaussians come from numpy's ziggurat sampler on Philox substreams; all
sign draws are packed 64-bit Rademacher words (see ``_kernels``).  Batch
output depends only on ``(master_seed, stream_index, chunk layout)``, never
on worker scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import ContractViolationError
from .hadamard import Dimension, SignVector
from .streams import Layer, Stream

# Elements per sampling chunk.  Part of the determinism contract: changing
# it reshuffles which substream serves which draw, so it is a constant, not
# a config knob.
CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class UnitVector:
    """A point on the unit sphere S^{d-1} with power-of-two d.

    Any finite nonzero vector is accepted and normalized on construction;
    non-finite input or the zero vector is rejected.
    """

    coords: np.ndarray
    dim: Dimension = field(init=False)

    def __post_init__(self) -> None:
        arr = np.array(self.coords, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ContractViolationError("coordinates must be 1-D")
        if not np.all(np.isfinite(arr)):
            raise ContractViolationError("coordinates must be finite")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ContractViolationError("the zero vector has no direction")
        arr /= norm
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "dim", Dimension(arr.shape[0]))

    @classmethod
    def basis(cls, dim: Dimension, index: int = 0) -> "UnitVector":
        if not 0 <= index < dim.d:
            raise ContractViolationError(f"basis index {index} out of range for d={dim.d}")
        coords = np.zeros(dim.d)
        coords[index] = 1.0
        return cls(coords)

    @classmethod
    def diagonal(cls, dim: Dimension) -> "UnitVector":
        """The balanced direction (1, ..., 1)/sqrt(d)."""
        return cls(np.ones(dim.d))


@dataclass(frozen=True, eq=False)
class RotationSeed:
    """Frozen randomness of one two-block transform draw.

    d1 and d2 come from disjoint substream layers of the same
    ``(master_seed, stream_index)``, so regenerating from those two
    integers reproduces the signs exactly.
    """

    d1: SignVector
    d2: SignVector
    master_seed: int
    stream_index: int

    def __post_init__(self) -> None:
        if len(self.d1) != len(self.d2):
            raise ContractViolationError("d1 and d2 must have equal length")

    @classmethod
    def draw(cls, dim: Dimension, stream: Stream) -> "RotationSeed":
        d1 = _draw_signs(stream.generator(Layer.D1), dim.d)
        d2 = _draw_signs(stream.generator(Layer.D2), dim.d)
        return cls(d1, d2, stream.master_seed, stream.stream_index)


@dataclass(frozen=True, eq=False)
class HypercubeVertex:
    """A vertex of the scaled hypercube {+-1/sqrt d}^d (a unit vector)."""

    signs: SignVector
    scale: float = field(init=False)

    def __post_init__(self) -> None:
        Dimension(len(self.signs))  # vertices live in power-of-two ambient spaces
        object.__setattr__(self, "scale", 1.0 / math.sqrt(len(self.signs)))

    def as_vector(self) -> np.ndarray:
        return self.signs.signs * self.scale

    def as_unit_vector(self) -> UnitVector:
        return UnitVector(self.as_vector())


def _draw_signs(gen: np.random.Generator, d: int) -> SignVector:
    return SignVector(gen.integers(0, 2, size=d).astype(np.float64) * 2.0 - 1.0)


def _rademacher_words(gen: np.random.Generator, m: int, d: int) -> np.ndarray:
    n_words = (d + 63) // 64
    return gen.integers(0, 1 << 64, size=(m, n_words), dtype=np.uint64, endpoint=False)


def two_block_transform(u: UnitVector, seed: RotationSeed) -> UnitVector:
    """Apply ``(1/d) H D1 H D2`` to u; the output is again a unit vector."""
    d = u.dim.d
    if len(seed.d1) != d:
        raise ContractViolationError(
            f"seed dimension {len(seed.d1)} does not match input dimension {d}"
        )
    y = u.coords * seed.d2.signs
    _kernels.fwht_1d(y)
    y *= seed.d1.signs
    _kernels.fwht_1d(y)
    y /= d
    return UnitVector(y)


def one_block_transform(u: UnitVector, s: SignVector) -> UnitVector:
    """Apply ``(1/sqrt d) H D`` to u.

    For u = e1 the result is one of just two antipodal vectors, which is
    exactly why the second block exists.
    """
    d = u.dim.d
    if len(s) != d:
        raise ContractViolationError(
            f"sign dimension {len(s)} does not match input dimension {d}"
        )
    y = u.coords * s.signs
    _kernels.fwht_1d(y)
    y /= math.sqrt(d)
    return UnitVector(y)


def sample_uniform_sphere(dim: Dimension, gen: np.random.Generator) -> UnitVector:
    """Uniform point on S^{d-1}: normalized standard Gaussians."""
    while True:
        g = gen.standard_normal(dim.d)
        if float(np.linalg.norm(g)) > 0.0:
            return UnitVector(g)


def sample_hypercube(dim: Dimension, gen: np.random.Generator) -> HypercubeVertex:
    """Uniform vertex of the scaled hypercube via d fair sign draws."""
    return HypercubeVertex(_draw_signs(gen, dim.d))


def nearest_hypercube_vertex(x: np.ndarray | UnitVector) -> HypercubeVertex:
    """The vertex whose signs match sign(x_i), with sign(0) taken as +1.

    This maximizes the inner product with x over all 2^d vertices, hence
    minimizes Euclidean distance among them.
    """
    arr = x.coords if isinstance(x, UnitVector) else np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractViolationError("expected a 1-D vector")
    return HypercubeVertex(SignVector(np.where(arr >= 0.0, 1.0, -1.0)))


def hypercube_distance(x: UnitVector) -> float:
    """Distance from a sphere point to the vertex set: sqrt(2 - 2 ||x||_1 / sqrt d).

    Clamped at zero against rounding; agrees with the explicit distance to
    ``nearest_hypercube_vertex(x)``.
    """
    d = x.dim.d
    l1 = float(np.abs(x.coords).sum())
    return math.sqrt(max(2.0 - 2.0 * l1 / math.sqrt(d), 0.0))


def chunk_rows(d: int) -> int:
    """Rows per sampling chunk for ambient dimension d (fixed layout)."""
    return max(1, CHUNK_ELEMS // d)


def iter_two_block_rows(
    u: UnitVector, n_samples: int, stream: Stream
) -> Iterator[np.ndarray]:
    """Yield chunks of independent two-block transform draws, one per row.

    Chunk c draws its sign words from substream chunks (D1, c) and (D2, c);
    the layout is fixed by ``chunk_rows``, making the sequence independent
    of how callers schedule the chunks.
    """
    d = u.dim.d
    rows = chunk_rows(d)
    out = None
    for c, start in enumerate(range(0, n_samples, rows)):
        m = min(rows, n_samples - start)
        w1 = _rademacher_words(stream.generator(Layer.D1, c), m, d)
        w2 = _rademacher_words(stream.generator(Layer.D2, c), m, d)
        if out is None or out.shape[0] != m:
            out = np.empty((m, d))
        _kernels.two_block_rows(u.coords, w1, w2, out)
        yield out


def iter_two_block_coordinate(
    u: UnitVector, k: int, n_samples: int, stream: Stream
) -> Iterator[np.ndarray]:
    """Yield chunks of coordinate k of independent two-block draws.

    Same substream layout as ``iter_two_block_rows`` but computes a single
    output coordinate per draw, which halves the transform work.
    """
    d = u.dim.d
    if not 0 <= k < d:
        raise ContractViolationError(f"coordinate {k} out of range for d={d}")
    rows = chunk_rows(d)
    h_row = _kernels.hadamard_sign_row(k, d)
    buf = np.empty(d)
    for c, start in enumerate(range(0, n_samples, rows)):
        m = min(rows, n_samples - start)
        w1 = _rademacher_words(stream.generator(Layer.D1, c), m, d)
        w2 = _rademacher_words(stream.generator(Layer.D2, c), m, d)
        out = np.empty(m)
        _kernels.two_block_coordinate_rows(u.coords, h_row, w1, w2, out, buf)
        yield out


def iter_b_fourth_moments(
    u: UnitVector, n_samples: int, stream: Stream
) -> Iterator[np.ndarray]:
    """Yield chunks of sum_j b_j^4 where b = (1/sqrt d) H D2 u, fresh D2 per row."""
    d = u.dim.d
    rows = chunk_rows(d)
    buf = np.empty(d)
    for c, start in enumerate(range(0, n_samples, rows)):
        m = min(rows, n_samples - start)
        w2 = _rademacher_words(stream.generator(Layer.D2, c), m, d)
        out = np.empty(m)
        _kernels.b_fourth_moment_rows(u.coords, w2, out, buf)
        yield out


def _gaussian_chunks(dim: Dimension, n_samples: int, stream: Stream) -> Iterator[np.ndarray]:
    rows = chunk_rows(dim.d)
    for c, start in enumerate(range(0, n_samples, rows)):
        m = min(rows, n_samples - start)
        yield stream.generator(Layer.GAUSS, c).standard_normal((m, dim.d))


def iter_sphere_l1_ratio(dim: Dimension, n_samples: int, stream: Stream) -> Iterator[np.ndarray]:
    """Yield chunks of ||X||_1 / sqrt(d) for X uniform on the sphere.

    Computed as ||G||_1 / (||G||_2 sqrt d) without materializing X.
    """
    sqrt_d = math.sqrt(dim.d)
    for g in _gaussian_chunks(dim, n_samples, stream):
        l1 = np.abs(g).sum(axis=1)
        l2 = np.sqrt(np.einsum("ij,ij->i", g, g))
        if not np.all(l2 > 0.0):
            raise ArithmeticError("degenerate zero-norm Gaussian draw")
        yield l1 / (l2 * sqrt_d)


def iter_sphere_coordinate(
    dim: Dimension, n_samples: int, stream: Stream, k: int = 0
) -> Iterator[np.ndarray]:
    """Yield chunks of coordinate k of uniform sphere points."""
    if not 0 <= k < dim.d:
        raise ContractViolationError(f"coordinate {k} out of range for d={dim.d}")
    for g in _gaussian_chunks(dim, n_samples, stream):
        l2 = np.sqrt(np.einsum("ij,ij->i", g, g))
        if not np.all(l2 > 0.0):
            raise ArithmeticError("degenerate zero-norm Gaussian draw")
        yield g[:, k] / l2

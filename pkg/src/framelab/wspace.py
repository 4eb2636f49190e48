"""Weighted Hilbert space of vector-valued functions on a uniform grid.

The domain is the unit interval sampled at the nodes x_i = i/N with
quadrature weight 1/N per node, so the underlying measure has total mass
one.  A nonnegative node weight w rescales the inner product, and values
live in a complex M-dimensional fiber.  Everything here is a pure function
of immutable inputs, safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "WeightedSpace",
    "Field",
    "inner",
    "norm",
    "total_mass",
    "random_field",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class WeightedSpace:
    """Uniform grid, fiber dimension and node weights.

    Attributes:
        grid_size: number N of grid nodes x_i = i/N in [0, 1).
        fiber_dim: dimension M of the value space.
        weights: N nonnegative node weights, at least one positive.
    """

    grid_size: int
    fiber_dim: int
    weights: np.ndarray

    def __post_init__(self):
        if int(self.grid_size) < 1:
            raise ValueError("grid_size must be >= 1")
        if int(self.fiber_dim) < 1:
            raise ValueError("fiber_dim must be >= 1")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.grid_size,):
            raise ValueError(
                f"weights must have shape ({self.grid_size},), got {w.shape}"
            )
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if not np.any(w > 0):
            raise ValueError("at least one weight must be positive")
        object.__setattr__(self, "weights", _readonly(w))

    @classmethod
    def uniform(cls, grid_size: int, fiber_dim: int = 1) -> "WeightedSpace":
        """Space with unit weight at every node."""
        return cls(grid_size, fiber_dim, np.ones(grid_size))

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size


@dataclass(frozen=True)
class Field:
    """Grid function with fiber values, stored as an N x M complex array."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2:
            raise ValueError("values must be a 2-d array (grid x fiber)")
        object.__setattr__(self, "values", _readonly(v))


def _conform(space: WeightedSpace, field: Field) -> None:
    expect = (space.grid_size, space.fiber_dim)
    if field.values.shape != expect:
        raise ValueError(
            f"field shape {field.values.shape} does not match space {expect}"
        )


def inner(space: WeightedSpace, f: Field, g: Field) -> complex:
    """Weighted quadrature inner product, linear in the first argument.

    <f, g> = (1/N) sum_i <f(x_i), g(x_i)>_fiber * w_i, with the fiber
    pairing conjugating its second slot.
    """
    _conform(space, f)
    _conform(space, g)
    val = np.einsum(
        "ij,ij,i->", f.values, g.values.conj(), space.weights
    ) / space.grid_size
    return complex(val)


def norm(space: WeightedSpace, f: Field) -> float:
    """Norm induced by ``inner``; zero exactly when f vanishes on the
    positive-weight nodes."""
    sq = inner(space, f, f).real
    return float(np.sqrt(max(sq, 0.0)))


def total_mass(space: WeightedSpace) -> float:
    """Quadrature integral of the weight, (1/N) sum_i w_i."""
    return float(space.weights.sum() / space.grid_size)


def random_field(space: WeightedSpace, rng: np.random.Generator) -> Field:
    """Standard complex Gaussian field, for sweeps and spot checks."""
    shape = (space.grid_size, space.fiber_dim)
    return Field(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

"""Doubly indexed coefficient operators attached to a tensor family.

For a field f, the pointwise coefficient against G_{m,n} is a scalar grid
function; integrating it against the node weights gives a complex
coefficient functional.  Stacking all the functionals, applied to a
weighted orthonormal coordinate system, yields the analysis matrix whose
singular values squared are the frame-operator spectrum.  With a complete
orthonormal scalar family that spectrum is the weight multiset, each value
repeated once per fiber dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .tensor_onb import TensorBasis, tensor_field
from .wspace import Field, WeightedSpace, _conform, inner, norm, total_mass

__all__ = [
    "OperatorFamily",
    "lambda_tilde",
    "lambda_coeff",
    "lambda_all",
    "lambda_tilde_adjoint",
    "lambda_adjoint",
    "analysis_matrix",
    "frame_spectrum",
    "parseval_residual",
    "bessel_excess",
]

DUAL_FORMULA_TOL = 1e-12


@dataclass(frozen=True)
class OperatorFamily:
    """A tensor basis bound to the space it analyzes.

    Index ranges: m in [0, M), n in [0, N).
    """

    space: WeightedSpace
    basis: TensorBasis

    def __post_init__(self):
        N, M = self.space.grid_size, self.space.fiber_dim
        if self.basis.scalar_family.shape != (N, N):
            raise ValueError(
                f"scalar family shape {self.basis.scalar_family.shape} "
                f"does not match grid size {N}"
            )
        if self.basis.fiber_family.shape != (M, M):
            raise ValueError(
                f"fiber family shape {self.basis.fiber_family.shape} "
                f"does not match fiber dimension {M}"
            )


def _check_index(fam: OperatorFamily, m: int, n: int) -> None:
    M, N = fam.space.fiber_dim, fam.space.grid_size
    if not (0 <= m < M and 0 <= n < N):
        raise IndexError(f"(m, n) = ({m}, {n}) out of range for ({M}, {N})")


def lambda_tilde(fam: OperatorFamily, m: int, n: int, field: Field) -> np.ndarray:
    """Pointwise coefficient x_i -> <f(x_i), G_{m,n}(x_i)>_fiber.

    Returns a length-N complex array, conj(f_n(x_i)) <f(x_i), g_m>.
    """
    _check_index(fam, m, n)
    _conform(fam.space, field)
    fiber_part = field.values @ fam.basis.fiber_family[m].conj()
    return fam.basis.scalar_family[n].conj() * fiber_part


def lambda_coeff(fam: OperatorFamily, m: int, n: int, field: Field, check: bool = True) -> complex:
    """Coefficient functional: quadrature of lambda_tilde against the weight.

    Computes the value two ways, as the weighted integral of the pointwise
    coefficient and as the weighted inner product <f, G_{m,n}>, and requires
    them to agree.

    Raises:
        ConsistencyError: if the two routes differ beyond 1e-12 (scaled).
    """
    space = fam.space
    v_int = complex(
        (lambda_tilde(fam, m, n, field) * space.weights).sum() / space.grid_size
    )
    if check:
        v_ip = inner(space, field, tensor_field(fam.basis, m, n))
        scale = max(
            1.0,
            float(
                (np.linalg.norm(field.values, axis=1) * space.weights).sum()
                / space.grid_size
            ),
        )
        if abs(v_int - v_ip) > DUAL_FORMULA_TOL * scale:
            raise ConsistencyError(
                f"coefficient routes disagree at (m, n) = ({m}, {n}): "
                f"{v_int} vs {v_ip}"
            )
    return v_int


def lambda_all(fam: OperatorFamily, field: Field) -> np.ndarray:
    """All coefficients at once as an (M, N) array; single-route, vectorized."""
    _conform(fam.space, field)
    V = field.values @ fam.basis.fiber_family.conj().T
    quad = fam.basis.scalar_family.conj() * (fam.space.weights / fam.space.grid_size)
    return (quad @ V).T


def lambda_tilde_adjoint(fam: OperatorFamily, m: int, n: int, phi: np.ndarray) -> Field:
    """Adjoint of the pointwise coefficient map: phi -> f_n * phi * g_m."""
    _check_index(fam, m, n)
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (fam.space.grid_size,):
        raise ValueError(f"phi must have shape ({fam.space.grid_size},)")
    vals = (fam.basis.scalar_family[n] * phi)[:, None] * fam.basis.fiber_family[m][None, :]
    return Field(vals)


def lambda_adjoint(fam: OperatorFamily, m: int, n: int, c: complex) -> Field:
    """Adjoint of the coefficient functional: c -> c * G_{m,n}."""
    _check_index(fam, m, n)
    return Field(complex(c) * tensor_field(fam.basis, m, n).values)


def _support_mask(fam: OperatorFamily, support) -> np.ndarray:
    w = fam.space.weights
    if support is None:
        if np.any(w <= 0):
            raise ValueError(
                "analysis matrix needs strictly positive weights; "
                "restrict to the support first"
            )
        return np.ones(fam.space.grid_size, dtype=bool)
    mask = np.asarray(support, dtype=bool)
    if mask.shape != (fam.space.grid_size,):
        raise ValueError("support mask must have one entry per grid node")
    if not mask.any():
        raise ValueError("support mask is empty")
    if np.any(w[mask] <= 0):
        raise ValueError("support mask includes zero-weight nodes")
    return mask


def analysis_matrix(fam: OperatorFamily, support=None) -> np.ndarray:
    """Matrix of all coefficient functionals in weighted coordinates.

    Columns correspond to the orthonormal coordinate fields of the weighted
    space (delta at node i, fiber direction j, scaled by sqrt(N / w_i)); the
    matrix is built by applying the coefficient functionals to each of them.
    Rows are indexed (m, n) m-major, columns (i, j) i-major over the support.

    Args:
        support: optional boolean node mask restricting the coordinate
            fields; required when some weights vanish.
    """
    mask = _support_mask(fam, support)
    space = fam.space
    N, M = space.grid_size, space.fiber_dim
    idx = np.flatnonzero(mask)
    T = np.empty((M * N, idx.size * M), dtype=complex)
    col = 0
    for i in idx:
        scale = np.sqrt(N / space.weights[i])
        for j in range(M):
            e = np.zeros((N, M), dtype=complex)
            e[i, j] = scale
            T[:, col] = lambda_all(fam, Field(e)).reshape(-1)
            col += 1
    return T


def frame_spectrum(fam: OperatorFamily, support=None) -> np.ndarray:
    """Ascending frame-operator spectrum (squared singular values of the
    analysis matrix)."""
    s = np.linalg.svd(analysis_matrix(fam, support), compute_uv=False)
    return np.sort(s) ** 2


def parseval_residual(fam: OperatorFamily, field: Field) -> float:
    """Worst relative defect, over n, of sum_m ||lambda_tilde_{m,n} f||^2
    against ||f||^2."""
    space = fam.space
    ns = norm(space, field) ** 2
    if ns == 0.0:
        return 0.0
    V = field.values @ fam.basis.fiber_family.conj().T
    worst = 0.0
    for n in range(space.grid_size):
        lt = fam.basis.scalar_family[n].conj()[:, None] * V
        s = float(
            ((np.abs(lt) ** 2).sum(axis=1) * space.weights).sum() / space.grid_size
        )
        worst = max(worst, abs(s - ns))
    return worst / ns


def bessel_excess(fam: OperatorFamily, field: Field) -> float:
    """Largest amount, over n, by which sum_m |coefficient|^2 exceeds the
    mass bound total_mass * ||f||^2.  Nonpositive means the bound holds."""
    coeffs = lambda_all(fam, field)
    per_n = (np.abs(coeffs) ** 2).sum(axis=0)
    cap = total_mass(fam.space) * norm(fam.space, field) ** 2
    return float(per_n.max() - cap)

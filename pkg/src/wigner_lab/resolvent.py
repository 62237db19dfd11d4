"""Green's function coefficients, the semicircular Stieltjes transform, and
spectral-window diagnostics.

Resolvent coefficients of M/sqrt(n) at energy z are available by two
independent routes: a direct linear solve, and the spectral sum

    sum_i  n P_{i,p,q}(A_n) / (lambda_i(A_n) - n z),       A_n = sqrt(n) M,

which agree whenever z keeps a positive distance to the spectrum.  A z that
hits the spectrum raises; nothing is ever regularized silently.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from dataclasses import dataclass

from .ensembles import MatrixSample
from .errors import SingularityError
from .spectral import SpectralDecomposition

_RESIDUAL_REL_TOL = 1e-8


@dataclass(frozen=True)
class ResolventQuery:
    """A probed energy z = E + i eta together with the coefficient indices."""

    z: complex
    p: int
    q: int
    n: int

    def __post_init__(self):
        if self.z.imag < 0:
            raise ValueError("query eta must be nonnegative")
        if not (0 <= self.p < self.n and 0 <= self.q < self.n):
            raise ValueError("coefficient indices out of range")

    @property
    def energy(self) -> float:
        return self.z.real

    @property
    def eta(self) -> float:
        return self.z.imag


def m_sc(z: complex, boundary: bool = False) -> complex:
    """Stieltjes transform of the semicircle law, (-z + sqrt(z-2)sqrt(z+2))/2.

    The product of principal square roots selects the branch that decays like
    -1/z at infinity on both half-planes and has positive imaginary part in
    the upper half-plane.  Real z inside [-2, 2] sits on the branch cut;
    request ``boundary=True`` to evaluate the limit from above explicitly.
    """
    z = complex(z)
    if z.imag == 0.0 and abs(z.real) <= 2.0:
        if not boundary:
            raise ValueError(
                "z lies on the spectrum [-2, 2]; pass boundary=True for the "
                "limit from the upper half-plane"
            )
        e = z.real
        return complex(-e / 2.0, math.sqrt(max(4.0 - e * e, 0.0)) / 2.0)
    return (-z + cmath.sqrt(z - 2.0) * cmath.sqrt(z + 2.0)) / 2.0


def _solve_column(b: np.ndarray, z: complex, q: int) -> np.ndarray:
    n = b.shape[0]
    a = b.astype(np.complex128) - z * np.eye(n)
    rhs = np.zeros(n, dtype=np.complex128)
    rhs[q] = 1.0
    try:
        x = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"resolvent system singular at z={z}: {exc}") from exc
    residual = np.abs(a @ x - rhs).max()
    if not np.isfinite(residual) or residual > _RESIDUAL_REL_TOL * (1.0 + np.abs(x).max()):
        raise SingularityError(
            f"resolvent solve unreliable at z={z}: residual {residual:.3e}",
            margin=residual,
        )
    return x


def resolvent_coeff_direct(m: MatrixSample, z: complex, p: int, q: int) -> complex:
    """Entry (p, q) of (M/sqrt(n) - zI)^{-1} by a direct linear solve."""
    b = m.matrix / math.sqrt(m.n)
    return complex(_solve_column(b, complex(z), q)[p])


def resolvent_coeff_spectral(
    dec: SpectralDecomposition, z: complex, p: int, q: int, n: int
) -> complex:
    """Entry (p, q) of the resolvent via the spectral sum over A_n = sqrt(n) M.

    ``dec`` must decompose the rescaled matrix A_n; each term pairs the scaled
    projector coefficient n P_{i,p,q} with the denominator lambda_i(A_n) - nz.
    """
    z = complex(z)
    denom = dec.eigenvalues - n * z
    margin = np.abs(denom).min()
    if margin == 0.0:
        raise SingularityError(f"nz={n*z} hits the spectrum exactly", margin=0.0)
    weights = n * dec.basis[p, :] * np.conj(dec.basis[q, :])
    return complex(np.sum(weights / denom))


def level_repulsion_margin(dec: SpectralDecomposition, z: complex, n: int) -> float:
    """Distance inf_i |lambda_i(A_n) - nz| from the probed energy to the spectrum."""
    return float(np.abs(dec.eigenvalues - n * complex(z)).min())


def rigidity_split(
    dec: SpectralDecomposition,
    window: tuple[int, int] | None,
    z: complex,
    z0: complex,
    p: int,
    q: int,
    n: int,
) -> tuple[complex, complex]:
    """Split the resolvent difference G(z) - G(z0) at (p, q) across an index window.

    Each spectral term uses F(x) = 1/(x - nz) - 1/(x - nz0), which decays
    quadratically far from the probed energy; the returned (near, far) parts
    sum over eigenvalue indices inside and outside ``window`` (an inclusive
    0-based pair, or None for the empty window) and add up to the full
    difference up to rounding.
    """
    z, z0 = complex(z), complex(z0)
    lam = dec.eigenvalues
    for point in (z, z0):
        if np.abs(lam - n * point).min() == 0.0:
            raise SingularityError(f"nz={n*point} hits the spectrum exactly", margin=0.0)
    weights = n * dec.basis[p, :] * np.conj(dec.basis[q, :])
    terms = weights * (1.0 / (lam - n * z) - 1.0 / (lam - n * z0))
    if window is None:
        return 0.0 + 0.0j, complex(np.sum(terms))
    lo, hi = window
    if lo > hi:
        return 0.0 + 0.0j, complex(np.sum(terms))
    if not (0 <= lo and hi < len(lam)):
        raise ValueError(f"window [{lo}, {hi}] out of range for n={len(lam)}")
    inside = np.zeros(len(lam), dtype=bool)
    inside[lo : hi + 1] = True
    return complex(np.sum(terms[inside])), complex(np.sum(terms[~inside]))


def local_law_deviation(m: MatrixSample, z: complex) -> float:
    """Largest entrywise deviation of the resolvent from m_sc(z) on the diagonal.

    Computes max_{p,q} |(M/sqrt(n) - zI)^{-1}_{pq} - m_sc(z) delta_{pq}|,
    the distance of the whole Green's function from its deterministic
    semicircle approximation.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("local law deviation needs Im z > 0")
    b = m.matrix / math.sqrt(m.n)
    a = b.astype(np.complex128) - z * np.eye(m.n)
    try:
        g = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:  # cannot happen for Im z > 0
        raise SingularityError(f"resolvent singular at z={z}: {exc}") from exc
    g[np.diag_indices(m.n)] -= m_sc(z)
    return float(np.abs(g).max())


def inverse_coeff(m: MatrixSample, p: int, q: int) -> complex:
    """Entry (p, q) of (M/sqrt(n))^{-1}, the z = 0 resolvent coefficient."""
    b = m.matrix / math.sqrt(m.n)
    smallest = np.linalg.svd(b, compute_uv=False)[-1]
    if smallest <= 1e-12:
        raise SingularityError(
            f"matrix is singular at z=0: smallest singular value {smallest:.3e}",
            margin=smallest,
        )
    return complex(_solve_column(b, 0.0 + 0.0j, q)[p])

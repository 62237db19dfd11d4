"""Wigner matrix sampling.

A :class:`WignerSpec` fixes the dimension, the symmetry class, and the entry
laws; :func:`sample` turns it into one Hermitian matrix draw.  Entry draws
come from a single sequential stream (strict upper triangle in row-major
order, then the diagonal), so a (spec, seed) pair pins the matrix exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import atoms
from .atoms import AtomDistribution

REAL_SYMMETRIC = "real_symmetric"
HERMITIAN = "hermitian"

_MOMENT_TOL = 1e-10


@dataclass(frozen=True)
class WignerSpec:
    """Ensemble description: dimension, symmetry class, entry laws.

    The off-diagonal law must have mean 0 and variance 1 (E|X|^2 = 1 in the
    complex case); the diagonal law must be real-valued with mean 0 and
    positive variance.  Real-symmetric ensembles need a real off-diagonal law.
    """

    n: int
    symmetry: str
    off_diag: AtomDistribution
    diag: AtomDistribution
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.symmetry not in (REAL_SYMMETRIC, HERMITIAN):
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        mean_re = atoms.moment(self.off_diag, 1, 0)
        mean_im = atoms.moment(self.off_diag, 0, 1)
        var = atoms.moment(self.off_diag, 2, 0) + atoms.moment(self.off_diag, 0, 2)
        if abs(mean_re) > _MOMENT_TOL or abs(mean_im) > _MOMENT_TOL:
            raise ValueError("off-diagonal law must have mean 0")
        if abs(var - 1.0) > _MOMENT_TOL:
            raise ValueError(f"off-diagonal law must have variance 1, got {var!r}")
        if not self.diag.is_real:
            raise ValueError("diagonal law must be real-valued")
        if abs(atoms.moment(self.diag, 1, 0)) > _MOMENT_TOL:
            raise ValueError("diagonal law must have mean 0")
        if atoms.moment(self.diag, 2, 0) <= 0.0:
            raise ValueError("diagonal law must have positive variance")
        if self.symmetry == REAL_SYMMETRIC and not self.off_diag.is_real:
            raise ValueError("real_symmetric ensembles need a real off-diagonal law")

    @property
    def label(self) -> str:
        base = self.name or f"{self.symmetry}:{self.off_diag.label}/{self.diag.label}"
        return f"{base}(n={self.n})"


@dataclass(frozen=True)
class MatrixSample:
    """One sampled matrix together with its provenance (spec and seed)."""

    matrix: np.ndarray = field(repr=False)
    spec: WignerSpec
    seed: int

    @property
    def n(self) -> int:
        return self.spec.n


def goe_spec(n: int) -> WignerSpec:
    """Gaussian orthogonal ensemble: N(0,1) off the diagonal, N(0,2) on it."""
    return WignerSpec(
        n=n,
        symmetry=REAL_SYMMETRIC,
        off_diag=atoms.gaussian_real(0.0, 1.0),
        diag=atoms.gaussian_real(0.0, 2.0),
        name="goe",
    )


def gue_spec(n: int) -> WignerSpec:
    """Gaussian unitary ensemble: standard complex normal off the diagonal."""
    return WignerSpec(
        n=n,
        symmetry=HERMITIAN,
        off_diag=atoms.gaussian_complex(1.0),
        diag=atoms.gaussian_real(0.0, 1.0),
        name="gue",
    )


def matched_goe_spec(n: int) -> WignerSpec:
    """Discrete ensemble matching GOE to order 4 off / order 2 on the diagonal.

    Off-diagonal entries follow the three-point law {+-sqrt(3) w.p. 1/6 each,
    0 w.p. 2/3}, whose first four moments (0, 1, 0, 3) equal the standard
    Gaussian's.  The diagonal uses the same shape scaled by sqrt(2), giving
    mean 0 and variance 2.
    """
    root6 = math.sqrt(6.0)
    return WignerSpec(
        n=n,
        symmetry=REAL_SYMMETRIC,
        off_diag=atoms.symmetric_three_point(3.0),
        diag=atoms.discrete([(root6, 1 / 6), (-root6, 1 / 6), (0.0, 2 / 3)]),
        name="matched-goe",
    )


def rademacher_spec(n: int) -> WignerSpec:
    """Sign-matrix ensemble: +-1 off the diagonal (matches GOE to order 3 only)."""
    return WignerSpec(
        n=n,
        symmetry=REAL_SYMMETRIC,
        off_diag=atoms.discrete([(1.0, 0.5), (-1.0, 0.5)]),
        diag=atoms.gaussian_real(0.0, 2.0),
        name="rademacher",
    )


def sample(spec: WignerSpec, seed: int) -> MatrixSample:
    """Draw one matrix: iid upper triangle, iid diagonal, conjugate lower half.

    Conjugate pairs are copied, not re-sampled, so the Hermitian symmetry is
    bit-exact.  Deterministic in (spec, seed).
    """
    rng = np.random.default_rng(int(seed))
    n = spec.n
    off = atoms.sample(spec.off_diag, n * (n - 1) // 2, rng)
    dia = atoms.sample(spec.diag, n, rng).real
    dtype = np.float64 if spec.symmetry == REAL_SYMMETRIC else np.complex128
    m = np.zeros((n, n), dtype=dtype)
    m[np.triu_indices(n, 1)] = off
    m = m + m.conj().T
    m[np.diag_indices(n)] = dia
    m.setflags(write=False)
    return MatrixSample(matrix=m, spec=spec, seed=int(seed))


def rescale(m: MatrixSample) -> np.ndarray:
    """The rescaled matrix sqrt(n) * M, whose mean bulk eigenvalue spacing is O(1)."""
    return math.sqrt(m.n) * m.matrix

"""Exact Haar samplers on the orthogonal and unitary groups.

The sampler QR-factorizes an iid Gaussian matrix and multiplies each column
of Q by the phase r_kk/|r_kk| of the corresponding diagonal entry of R.  The
phase correction is what makes the law exactly Haar: plain QR of a Gaussian
matrix is biased toward matrices with positive R diagonal and its column
distribution is not rotation invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .spectral import ADHOC, RANDOM

ORTHOGONAL = "orthogonal"
UNITARY = "unitary"


@dataclass(frozen=True)
class HaarMatrix:
    """One Haar-distributed orthogonal or unitary matrix."""

    entries: np.ndarray = field(repr=False)
    group: str

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def haar_sample(group: str, n: int, seed: int) -> HaarMatrix:
    """Draw one matrix from Haar measure on O(n) or U(n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if group not in (ORTHOGONAL, UNITARY):
        raise ValueError(f"unknown group {group!r}")
    rng = np.random.default_rng(int(seed))
    while True:
        if group == ORTHOGONAL:
            g = rng.standard_normal((n, n))
        else:
            g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        q, r = np.linalg.qr(g)
        d = np.diagonal(r)
        if np.any(d == 0):  # almost surely never; resample from the same stream
            continue
        q = q * (d / np.abs(d))
        q.setflags(write=False)
        return HaarMatrix(entries=q, group=group)


def minor(h: HaarMatrix, rows, cols) -> np.ndarray:
    """The selected block scaled by sqrt(n), matching the sqrt(n) u_{i,p} scaling."""
    rows = list(rows)
    cols = list(cols)
    for name, idx in (("rows", rows), ("cols", cols)):
        if len(set(idx)) != len(idx):
            raise ValueError(f"{name} must be distinct")
        if len(idx) > h.n or any(not 0 <= k < h.n for k in idx):
            raise ValueError(f"{name} out of range for n={h.n}")
    return math.sqrt(h.n) * h.entries[np.ix_(rows, cols)]


NORMAL = "normal"
HALF_NORMAL = "half_normal"
COMPLEX_NORMAL = "complex_normal"
COMPLEX_MODULUS = "complex_modulus"


@dataclass(frozen=True)
class ReferenceLaw:
    """A limiting coefficient law: sampler plus (for real laws) its CDF."""

    kind: str

    @property
    def is_complex(self) -> bool:
        return self.kind in (COMPLEX_NORMAL,)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == NORMAL:
            return rng.standard_normal(size)
        if self.kind == HALF_NORMAL:
            return np.abs(rng.standard_normal(size))
        re = rng.standard_normal(size)
        im = rng.standard_normal(size)
        z = (re + 1j * im) / math.sqrt(2.0)
        if self.kind == COMPLEX_MODULUS:
            return np.abs(z)
        return z

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == NORMAL:
            return ndtr(x)
        if self.kind == HALF_NORMAL:
            return np.where(x < 0, 0.0, 2.0 * ndtr(x) - 1.0)
        if self.kind == COMPLEX_MODULUS:
            # |Z|^2 is Exp(1) when E|Z|^2 = 1.
            return np.where(x < 0, 0.0, 1.0 - np.exp(-(x**2)))
        raise ValueError(f"no scalar CDF for {self.kind!r}")


def goe_gue_reference(ensemble: str, p: int, normalization: str) -> ReferenceLaw:
    """Limiting law of the coefficient sqrt(n) u_{i,p} for GOE/GUE eigenvectors.

    Under the adhoc normalization the first coefficient (p = 0) is forced
    positive, so its limit is the modulus of the Gaussian; every other
    coefficient, and every coefficient under the random normalization, is an
    unconstrained real (GOE) or complex (GUE) standard Gaussian.
    """
    if ensemble not in ("goe", "gue"):
        raise ValueError(f"expected 'goe' or 'gue', got {ensemble!r}")
    if normalization not in (ADHOC, RANDOM):
        raise ValueError(f"reference law needs adhoc or random, got {normalization!r}")
    first = normalization == ADHOC and p == 0
    if ensemble == "goe":
        return ReferenceLaw(HALF_NORMAL if first else NORMAL)
    return ReferenceLaw(COMPLEX_MODULUS if first else COMPLEX_NORMAL)

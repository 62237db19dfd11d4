"""Eigendecomposition and eigenvector-level observables.

Eigenvectors of a Hermitian matrix are only defined up to a unit phase (a
sign, in the real symmetric case).  Three normalization modes resolve the
ambiguity:

- ``adhoc``:  multiply each eigenvector by the unit phase making its first
  coefficient of non-negligible magnitude positive real;
- ``random``: multiply each eigenvector by an independent uniform phase
  (uniform sign for real matrices), drawn from an explicit seed;
- ``raw``:    keep the solver output.

Phase-invariant statistics (projection coefficients, gaps, the inverse-square
gap sum, the sup norm) are computed from the solver basis directly, so their
values are bit-identical across normalization modes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrumError, NonHermitianError

ADHOC = "adhoc"
RANDOM = "random"
RAW = "raw"
NORMALIZATIONS = (ADHOC, RANDOM, RAW)

#: Coefficient p is eligible as "first nonzero" if |u_p| > this factor times n.
FIRST_COEFF_REL_THRESHOLD = 1e-13

#: An eigenvalue is treated as simple when its nearest-neighbor gap exceeds this.
SIMPLE_GAP_TOL = 1e-12

_HERMITICITY_REL_TOL = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues plus an orthonormal eigenvector basis.

    ``eigenvectors`` carries the normalization mode requested at construction;
    ``basis`` is the raw solver output (one fixed phase choice), kept so that
    phase-invariant observables do not depend on the mode.
    """

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    normalization: str
    phase_seed: int | None = None
    basis: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def middle_index(n: int) -> int:
    """0-based index of the bulk-center eigenvalue (floor(n/2) in 1-based terms)."""
    return max(n // 2 - 1, 0)


def _first_significant_index(u: np.ndarray, threshold: float) -> int:
    big = np.abs(u) > threshold
    if not big.any():
        raise ValueError("no coefficient exceeds the first-nonzero threshold")
    return int(np.argmax(big))


def _adhoc_factors(basis: np.ndarray, threshold: float) -> np.ndarray:
    n = basis.shape[1]
    factors = np.empty(n, dtype=basis.dtype)
    for i in range(n):
        lead = basis[_first_significant_index(basis[:, i], threshold), i]
        if np.isrealobj(basis):
            factors[i] = 1.0 if lead > 0 else -1.0
        else:
            factors[i] = np.conj(lead) / abs(lead)
    return factors


def _random_factors(basis: np.ndarray, phase_seed: int | None) -> np.ndarray:
    rng = np.random.default_rng(phase_seed)
    n = basis.shape[1]
    if np.isrealobj(basis):
        return np.where(rng.random(n) < 0.5, 1.0, -1.0)
    return np.exp(2j * np.pi * rng.random(n))


def decompose(
    matrix: np.ndarray,
    normalization: str = ADHOC,
    phase_seed: int | None = None,
) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix and fix eigenvector phases.

    Rejects inputs whose Hermitian defect exceeds 1e-12 times the Frobenius
    norm.  Eigenvalues come back ascending; columns of ``eigenvectors`` are
    the corresponding unit eigenvectors under the requested normalization.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    fro = np.linalg.norm(m)
    defect = np.abs(m - m.conj().T).max()
    if defect > _HERMITICITY_REL_TOL * fro:
        raise NonHermitianError(
            f"matrix is not Hermitian: defect {defect:.3e} vs norm {fro:.3e}"
        )
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    try:
        eigenvalues, basis = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigensolver failed to converge: {exc}") from exc
    basis.setflags(write=False)
    eigenvalues.setflags(write=False)
    return _with_mode(eigenvalues, basis, normalization, phase_seed)


def _with_mode(eigenvalues, basis, normalization, phase_seed) -> SpectralDecomposition:
    n = basis.shape[1]
    if normalization == RAW:
        vectors = basis
    elif normalization == ADHOC:
        vectors = basis * _adhoc_factors(basis, FIRST_COEFF_REL_THRESHOLD * n)
    else:
        vectors = basis * _random_factors(basis, phase_seed)
    if vectors is not basis:
        vectors.setflags(write=False)
    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        eigenvectors=vectors,
        normalization=normalization,
        phase_seed=phase_seed,
        basis=basis,
    )


def with_normalization(
    dec: SpectralDecomposition,
    normalization: str,
    phase_seed: int | None = None,
) -> SpectralDecomposition:
    """Re-normalize an existing decomposition without re-solving."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    return _with_mode(dec.eigenvalues, dec.basis, normalization, phase_seed)


def normalize_eigenvector(
    u: np.ndarray,
    mode: str,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Apply one normalization mode to a single unit vector."""
    v = np.array(u, copy=True)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"expected a unit vector, got norm {norm!r}")
    if mode == RAW:
        return v
    if mode == ADHOC:
        lead = v[_first_significant_index(v, FIRST_COEFF_REL_THRESHOLD * len(v))]
        if np.isrealobj(v):
            return v if lead > 0 else -v
        return v * (np.conj(lead) / abs(lead))
    if mode == RANDOM:
        if rng is None:
            raise ValueError("random normalization needs an explicit rng")
        if np.isrealobj(v):
            return v if rng.random() < 0.5 else -v
        return v * np.exp(2j * np.pi * rng.random())
    raise ValueError(f"unknown normalization {mode!r}")


def projection_coeff(dec: SpectralDecomposition, i: int, p: int, q: int) -> complex:
    """Coefficient (p, q) of the rank-one spectral projector u_i u_i^*.

    Computed from the phase-free basis, hence independent of the
    normalization mode (the phase cancels exactly).
    """
    return complex(dec.basis[p, i] * np.conj(dec.basis[q, i]))


def nearest_gap(dec: SpectralDecomposition, i: int) -> float:
    """Distance from eigenvalue i to its nearest neighbor (inf for n = 1)."""
    w = dec.eigenvalues
    if not 0 <= i < len(w):
        raise ValueError(f"eigenvalue index {i} out of range for n={len(w)}")
    gaps = []
    if i > 0:
        gaps.append(w[i] - w[i - 1])
    if i < len(w) - 1:
        gaps.append(w[i + 1] - w[i])
    return float(min(gaps)) if gaps else float("inf")


def gap(dec: SpectralDecomposition, i: int) -> float:
    """Consecutive eigenvalue gap lambda_{i+1} - lambda_i (0-based gap index)."""
    w = dec.eigenvalues
    if not 0 <= i < len(w) - 1:
        raise ValueError(f"gap index {i} out of range for n={len(w)}")
    return float(w[i + 1] - w[i])


def min_gap(dec: SpectralDecomposition, i_lo: int = 0, i_hi: int | None = None) -> float:
    """Minimum consecutive gap over gap indices i_lo..i_hi inclusive."""
    w = dec.eigenvalues
    if len(w) < 2:
        raise ValueError("min_gap needs at least two eigenvalues")
    if i_hi is None:
        i_hi = len(w) - 2
    if not (0 <= i_lo <= i_hi <= len(w) - 2):
        raise ValueError(f"gap window [{i_lo}, {i_hi}] out of range for n={len(w)}")
    return float(np.diff(w)[i_lo : i_hi + 1].min())


def q_statistic(dec: SpectralDecomposition, i: int) -> float:
    """Inverse-square gap sum sum_{j != i} 1/(lambda_j - lambda_i)^2.

    Requires eigenvalue i to be simple (nearest gap above SIMPLE_GAP_TOL);
    a degenerate spectrum raises instead of returning a huge value.
    """
    w = dec.eigenvalues
    if not 0 <= i < len(w):
        raise ValueError(f"eigenvalue index {i} out of range for n={len(w)}")
    if nearest_gap(dec, i) <= SIMPLE_GAP_TOL:
        raise DegenerateSpectrumError(
            f"eigenvalue {i} has nearest gap <= {SIMPLE_GAP_TOL}"
        )
    diffs = np.delete(w - w[i], i)
    return float(np.sum(1.0 / diffs**2))


def delocalization_sup(dec: SpectralDecomposition) -> float:
    """Largest coefficient magnitude sup_{i,p} |u_{i,p}| over the whole basis."""
    return float(np.abs(dec.basis).max())


@dataclass(frozen=True)
class ObservableTuple:
    """Selected eigenvalues plus n-scaled projection coefficients.

    Entries of ``projection_part`` with p = q are real (exactly: the imaginary
    rounding cancels) and lie in [0, n].
    """

    eigenvalue_part: np.ndarray
    projection_part: np.ndarray

    def as_real_vector(self) -> np.ndarray:
        """Flatten to reals: (eigenvalues, Re projections, Im projections)."""
        return np.concatenate(
            [
                self.eigenvalue_part,
                self.projection_part.real,
                self.projection_part.imag,
            ]
        )


def phi_observable(
    dec: SpectralDecomposition,
    i_indices,
    p_indices,
    q_indices,
    n: int,
) -> ObservableTuple:
    """Assemble the observable tuple from a decomposition of the rescaled matrix.

    ``dec`` must decompose A = sqrt(n) M; the eigenvalue part reads selected
    eigenvalues of A and the projection part scales each coefficient of the
    rank-one projector by n.
    """
    i_idx = list(i_indices)
    p_idx = list(p_indices)
    q_idx = list(q_indices)
    if not i_idx or not len(i_idx) == len(p_idx) == len(q_idx):
        raise ValueError("index lists must be nonempty and of equal length")
    eig = dec.eigenvalues[i_idx].astype(np.float64)
    proj = np.array(
        [n * projection_coeff(dec, i, p, q) for i, p, q in zip(i_idx, p_idx, q_idx)],
        dtype=np.complex128,
    )
    for a, (p, q) in enumerate(zip(p_idx, q_idx)):
        if p == q and not (proj[a].imag == 0.0 and -1e-9 <= proj[a].real <= n + 1e-9):
            raise AssertionError(f"diagonal projection entry {proj[a]} outside [0, n]")
    return ObservableTuple(eigenvalue_part=eig, projection_part=proj)

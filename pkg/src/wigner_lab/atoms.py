"""Scalar entry distributions for Wigner ensembles.

An atom distribution is the law of a single matrix entry: a real Gaussian, a
complex Gaussian (independent real and imaginary parts of equal variance), or
a finite discrete law.  Mixed moments E[Re(X)^a Im(X)^b] are always evaluated
in closed form, so moment-matching certificates carry no statistical error;
sampling is reserved for Monte Carlo.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleMomentError, UnsupportedOrderError

GAUSSIAN_REAL = "gaussian_real"
GAUSSIAN_COMPLEX = "gaussian_complex"
DISCRETE = "discrete"

#: Largest supported total moment order a + b.
MOMENT_ORDER_CEILING = 12

#: Default tolerance for moment-matching checks (values are analytic, only
#: float roundoff is present).
DEFAULT_MATCH_TOL = 1e-10

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AtomDistribution:
    """A samplable scalar law with exact moment access.

    Exactly one parameter set is meaningful per ``kind``: (mean, variance) for
    ``gaussian_real``, variance for ``gaussian_complex`` (real and imaginary
    parts iid with variance/2 each), and ``atoms`` — a tuple of (value, prob)
    pairs — for ``discrete``.  Instances are immutable; build them through the
    factory functions below, which validate the invariants.
    """

    kind: str
    mean: float = 0.0
    variance: float = 0.0
    atoms: tuple[tuple[complex, float], ...] = ()

    @property
    def is_real(self) -> bool:
        if self.kind == GAUSSIAN_REAL:
            return True
        if self.kind == GAUSSIAN_COMPLEX:
            return False
        return all(value.imag == 0.0 for value, _ in self.atoms)

    @property
    def label(self) -> str:
        if self.kind == GAUSSIAN_REAL:
            return f"N({self.mean:g},{self.variance:g})_R"
        if self.kind == GAUSSIAN_COMPLEX:
            return f"N(0,{self.variance:g})_C"
        return f"discrete[{len(self.atoms)}]"


def gaussian_real(mean: float = 0.0, variance: float = 1.0) -> AtomDistribution:
    """Real Gaussian atom N(mean, variance)."""
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    return AtomDistribution(GAUSSIAN_REAL, mean=float(mean), variance=float(variance))


def gaussian_complex(variance: float = 1.0) -> AtomDistribution:
    """Complex Gaussian atom with E|X|^2 = variance.

    Real and imaginary parts are iid N(0, variance/2); variance = 1 gives the
    standard complex normal used for Hermitian off-diagonal entries.
    """
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    return AtomDistribution(GAUSSIAN_COMPLEX, variance=float(variance))


def discrete(atoms) -> AtomDistribution:
    """Finite discrete atom from (value, prob) pairs.

    Probabilities must be positive and sum to 1 within 1e-12; values must be
    pairwise distinct.
    """
    pairs = tuple((complex(v), float(p)) for v, p in atoms)
    if not pairs:
        raise ValueError("discrete distribution needs at least one atom")
    total = math.fsum(p for _, p in pairs)
    if abs(total - 1.0) > _PROB_SUM_TOL:
        raise ValueError(f"atom probabilities sum to {total!r}, not 1")
    if any(p <= 0 for _, p in pairs):
        raise ValueError("atom probabilities must be positive")
    values = [v for v, _ in pairs]
    if len(set(values)) != len(values):
        raise ValueError("atom values must be pairwise distinct")
    return AtomDistribution(DISCRETE, atoms=pairs)


def _double_factorial_odd(j: int) -> int:
    # (j - 1)!! for even j >= 0; the number of pairings of j items.
    out = 1
    for m in range(1, j, 2):
        out *= m
    return out


def _gaussian_raw_moment(mean: float, variance: float, k: int) -> float:
    """E[X^k] for X ~ N(mean, variance), via the binomial/pairing expansion."""
    if k == 0:
        return 1.0
    total = 0.0
    for j in range(0, k + 1, 2):
        total += (
            math.comb(k, j)
            * _double_factorial_odd(j)
            * variance ** (j // 2)
            * mean ** (k - j)
        )
    return total


def moment(dist: AtomDistribution, a: int, b: int) -> float:
    """Exact mixed moment E[Re(X)^a Im(X)^b].

    Parameters
    ----------
    dist : AtomDistribution
    a, b : int
        Nonnegative exponents with a + b <= MOMENT_ORDER_CEILING.
    """
    if a < 0 or b < 0:
        raise ValueError("moment exponents must be nonnegative")
    if a + b > MOMENT_ORDER_CEILING:
        raise UnsupportedOrderError(
            f"moment order {a + b} exceeds ceiling {MOMENT_ORDER_CEILING}"
        )
    if dist.kind == GAUSSIAN_REAL:
        # Imaginary part is identically zero, so Im^b kills every b >= 1 term.
        if b >= 1:
            return 0.0
        return _gaussian_raw_moment(dist.mean, dist.variance, a)
    if dist.kind == GAUSSIAN_COMPLEX:
        half = dist.variance / 2.0
        return _gaussian_raw_moment(0.0, half, a) * _gaussian_raw_moment(0.0, half, b)
    return math.fsum(p * value.real**a * value.imag**b for value, p in dist.atoms)


@dataclass(frozen=True)
class MomentTable:
    """All mixed moments of total order <= ``order`` of one distribution."""

    order: int
    entries: dict

    def __getitem__(self, key: tuple[int, int]) -> float:
        return self.entries[key]


def moment_table(dist: AtomDistribution, order: int) -> MomentTable:
    if order < 1:
        raise ValueError("order must be >= 1")
    entries = {
        (a, b): moment(dist, a, b)
        for a in range(order + 1)
        for b in range(order + 1 - a)
    }
    return MomentTable(order=order, entries=entries)


def matches_to_order(
    d1: AtomDistribution,
    d2: AtomDistribution,
    k: int,
    tol: float = DEFAULT_MATCH_TOL,
) -> bool:
    """True iff all mixed moments of total order <= k agree within ``tol``."""
    if k > MOMENT_ORDER_CEILING:
        raise UnsupportedOrderError(f"order {k} exceeds ceiling {MOMENT_ORDER_CEILING}")
    for a in range(k + 1):
        for b in range(k + 1 - a):
            if abs(moment(d1, a, b) - moment(d2, a, b)) > tol:
                return False
    return True


def symmetric_three_point(m4: float) -> AtomDistribution:
    """Sign-symmetric discrete law with mean 0, variance 1, fourth moment m4.

    Puts mass p = 1/(2 m4) at each of +-sqrt(m4) and the remainder at 0.  The
    fourth moment of a unit-variance law is at least 1, so m4 < 1 is
    infeasible; m4 = 1 degenerates to the symmetric two-point (Rademacher)
    law with no mass at zero.
    """
    if m4 < 1.0:
        raise InfeasibleMomentError(
            f"fourth moment {m4} < 1 violates E[X^4] >= (E[X^2])^2"
        )
    a = math.sqrt(m4)
    p = 1.0 / (2.0 * m4)
    rest = 1.0 - 2.0 * p
    if rest <= 0.0:
        return discrete([(a, 0.5), (-a, 0.5)])
    return discrete([(a, p), (-a, p), (0.0, rest)])


def condition_c1_bound(dist: AtomDistribution, c0: float) -> float:
    """Absolute moment E|X|^c0 (the finite-moment certificate of an atom law)."""
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    if dist.kind == DISCRETE:
        return math.fsum(p * abs(value) ** c0 for value, p in dist.atoms)
    if dist.kind == GAUSSIAN_COMPLEX:
        # |X| is Rayleigh with E|X|^2 = variance.
        return dist.variance ** (c0 / 2.0) * math.gamma(1.0 + c0 / 2.0)
    if dist.mean == 0.0:
        sigma = math.sqrt(dist.variance)
        return sigma**c0 * 2 ** (c0 / 2.0) * math.gamma((c0 + 1.0) / 2.0) / math.sqrt(math.pi)
    # Noncentral case: Gauss-Hermite quadrature of |mean + sigma*sqrt(2) t|^c0.
    nodes, weights = np.polynomial.hermite.hermgauss(200)
    sigma = math.sqrt(dist.variance)
    vals = np.abs(dist.mean + sigma * math.sqrt(2.0) * nodes) ** c0
    return float(np.sum(weights * vals) / math.sqrt(math.pi))


def sample(dist: AtomDistribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` iid values; float64 for real laws, complex128 otherwise.

    The caller owns the generator, so streams are reproducible and can be
    partitioned across trials externally.
    """
    if dist.kind == GAUSSIAN_REAL:
        return rng.normal(dist.mean, math.sqrt(dist.variance), size)
    if dist.kind == GAUSSIAN_COMPLEX:
        scale = math.sqrt(dist.variance / 2.0)
        re = rng.normal(0.0, scale, size)
        im = rng.normal(0.0, scale, size)
        return re + 1j * im
    values = np.array([v for v, _ in dist.atoms])
    if dist.is_real:
        values = values.real
    cum = np.cumsum([p for _, p in dist.atoms])
    idx = np.searchsorted(cum, rng.random(size), side="right")
    return values[np.minimum(idx, len(values) - 1)]


def to_json_dict(dist: AtomDistribution) -> dict:
    """Serialize a discrete law as {"atoms": [{"re", "im", "prob"}, ...]}."""
    if dist.kind != DISCRETE:
        raise ValueError("only discrete distributions serialize to atom JSON")
    return {
        "atoms": [
            {"re": v.real, "im": v.imag, "prob": p} for v, p in dist.atoms
        ]
    }


def from_json_dict(obj: dict) -> AtomDistribution:
    """Parse the atom-file schema produced by :func:`to_json_dict`."""
    try:
        pairs = [
            (complex(entry["re"], entry.get("im", 0.0)), entry["prob"])
            for entry in obj["atoms"]
        ]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed atom file: {exc}") from exc
    return discrete(pairs)

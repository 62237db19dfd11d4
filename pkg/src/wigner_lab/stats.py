"""Statistical machinery: KS tests, moment reports, smooth-functional
comparisons between ensembles, and projection central-limit experiments.

All Monte Carlo loops derive per-trial seeds with splitmix64 from a master
seed and reduce in trial order, so every report here is reproducible
bit-for-bit regardless of thread count.  Trials whose required eigenvalue is
not simple (possible for discrete ensembles) are excluded and counted, never
silently patched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from . import atoms, ensembles, spectral
from .ensembles import WignerSpec
from .errors import HypothesisViolationError
from .seeding import derive_seed, trial_map
from .spectral import ADHOC, RANDOM, ObservableTuple, SpectralDecomposition

#: Monte Carlo verdicts use this many combined standard errors everywhere.
SIGMA_FACTOR = 3.0

#: Committed desk-scale thresholds for the projection CLT experiment.
DEFAULT_CLT_KS_THRESHOLD = 0.06
DEFAULT_CLT_MEAN_TOL = 0.10
DEFAULT_CLT_VAR_TOL = 0.15

#: Joint experiments are capped at this many simultaneous indices/vectors.
MAX_JOINT_SIZE = 5


@dataclass(frozen=True)
class Provenance:
    spec_id: str
    observable_id: str
    master_seed: int

    def as_dict(self) -> dict:
        return {
            "spec_id": self.spec_id,
            "observable_id": self.observable_id,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class EmpiricalSample:
    """Raw Monte Carlo draws plus where they came from."""

    values: np.ndarray = field(repr=False)
    trials: int
    provenance: Provenance

    def __post_init__(self):
        if len(self.values) != self.trials:
            raise ValueError("trials must equal the number of stored values")


@dataclass(frozen=True)
class TestReport:
    """A single statistic against a fixed threshold."""

    name: str
    statistic: float
    threshold: float
    standard_error: float | None
    passed: bool
    metadata: dict = field(default_factory=dict)

    @classmethod
    def evaluate(cls, name, statistic, threshold, standard_error=None, metadata=None):
        statistic = float(statistic)
        threshold = float(threshold)
        return cls(
            name=name,
            statistic=statistic,
            threshold=threshold,
            standard_error=None if standard_error is None else float(standard_error),
            passed=statistic <= threshold,
            metadata=metadata or {},
        )

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "se": self.standard_error,
            "pass": self.passed,
            "metadata": self.metadata,
        }


# ---------------------------------------------------------------------------
# Smooth functional catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothFunctional:
    """A test functional from a closed catalog with declared derivative bounds.

    The catalog is closed on purpose: each kind comes with a sup bound and a
    (conservative) bound valid for all derivatives up to order five, so the
    smoothness hypotheses of moment-comparison experiments hold by
    construction rather than by trust in user code.
    """

    kind: str
    params: dict
    sup_bound: float
    grad_bound: float

    def __call__(self, phi: ObservableTuple) -> float:
        x = phi.as_real_vector()
        value = _evaluate_functional(self.kind, self.params, x)
        if math.isfinite(self.sup_bound) and abs(value) > self.sup_bound * (1 + 1e-9):
            raise AssertionError(
                f"functional {self.kind} exceeded its declared bound: "
                f"|{value}| > {self.sup_bound}"
            )
        return value

    def as_config(self) -> dict:
        return {"kind": self.kind, **self.params}


def _select(x: np.ndarray, indices) -> np.ndarray:
    if indices is None:
        return x
    return x[np.asarray(indices, dtype=int)]


def _evaluate_functional(kind: str, params: dict, x: np.ndarray) -> float:
    if kind == "gaussian_bump":
        sel = _select(x, params["indices"])
        center = np.asarray(params["center"], dtype=np.float64)
        width = params["width"]
        return float(np.exp(-np.sum((sel - center) ** 2) / (2.0 * width**2)))
    if kind == "coordinate":
        return float(x[params["index"]])
    if kind == "sine":
        return math.sin(params["frequency"] * x[params["index"]] + params["phase"])
    if kind == "bounded_polynomial_window":
        t = (x[params["index"]] - params["center"]) / params["radius"]
        if abs(t) >= 1.0:
            return 0.0
        window = math.exp(1.0 - 1.0 / (1.0 - t * t))
        return float(np.polyval(params["coeffs"][::-1], t) * window)
    raise ValueError(f"unknown functional kind {kind!r}")


def gaussian_bump(center, width: float, indices=None) -> SmoothFunctional:
    """exp(-|x_sel - center|^2 / 2 width^2) over selected flat coordinates."""
    if width <= 0:
        raise ValueError("width must be positive")
    center = [float(c) for c in np.atleast_1d(center)]
    params = {"center": center, "width": float(width),
              "indices": None if indices is None else [int(i) for i in indices]}
    return SmoothFunctional(
        kind="gaussian_bump",
        params=params,
        sup_bound=1.0,
        # Hermite-function sups up to order five, inflated to a safe envelope.
        grad_bound=10.0 * max(1.0, 1.0 / width) ** 5,
    )


def coordinate(index: int) -> SmoothFunctional:
    """The bare coordinate x[index]; unbounded, with unit derivative bound."""
    return SmoothFunctional(
        kind="coordinate",
        params={"index": int(index)},
        sup_bound=math.inf,
        grad_bound=1.0,
    )


def sine(frequency: float, index: int, phase: float = 0.0) -> SmoothFunctional:
    return SmoothFunctional(
        kind="sine",
        params={"frequency": float(frequency), "index": int(index), "phase": float(phase)},
        sup_bound=1.0,
        grad_bound=max(1.0, abs(frequency)) ** 5,
    )


def bounded_polynomial_window(coeffs, center: float, radius: float, index: int) -> SmoothFunctional:
    """Polynomial in (x-center)/radius times a smooth compactly supported window.

    The window exp(1 - 1/(1-t^2)) on |t| < 1 caps |G| at the coefficient l1
    norm; its derivatives are large near the edges, hence the loose declared
    envelope.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    coeffs = [float(c) for c in coeffs]
    l1 = sum(abs(c) for c in coeffs)
    return SmoothFunctional(
        kind="bounded_polynomial_window",
        params={"coeffs": coeffs, "center": float(center),
                "radius": float(radius), "index": int(index)},
        sup_bound=l1,
        grad_bound=1e4 * max(1.0, l1) * max(1.0, 1.0 / radius) ** 5,
    )


_FUNCTIONAL_FACTORIES = {
    "gaussian_bump": gaussian_bump,
    "coordinate": coordinate,
    "sine": sine,
    "bounded_polynomial_window": bounded_polynomial_window,
}


def functional_from_config(cfg: dict) -> SmoothFunctional:
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    factory = _FUNCTIONAL_FACTORIES.get(kind)
    if factory is None:
        raise ValueError(f"unknown functional kind {kind!r}")
    return factory(**cfg)


# ---------------------------------------------------------------------------
# Observable selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObservableConfig:
    """Index selection for the observable tuple (0-based everywhere)."""

    i_indices: tuple[int, ...]
    p_indices: tuple[int, ...]
    q_indices: tuple[int, ...]

    def __post_init__(self):
        k = len(self.i_indices)
        if k < 1 or len(self.p_indices) != k or len(self.q_indices) != k:
            raise ValueError("index tuples must be nonempty and of equal length")
        if k > MAX_JOINT_SIZE:
            raise ValueError(f"joint observables capped at k={MAX_JOINT_SIZE}")

    @property
    def label(self) -> str:
        triples = ";".join(
            f"{i},{p},{q}"
            for i, p, q in zip(self.i_indices, self.p_indices, self.q_indices)
        )
        return f"phi({triples})"


def middle_observable(n: int) -> ObservableConfig:
    """The default scalar observable: middle eigenvalue plus n P_{mid,0,0}."""
    i = spectral.middle_index(n)
    return ObservableConfig((i,), (0,), (0,))


# ---------------------------------------------------------------------------
# Elementary estimators
# ---------------------------------------------------------------------------

def ks_statistic(sample, reference_cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance to a reference CDF.

    Evaluates sup over the sorted points x_(i) of
    max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
    """
    values = sample.values if isinstance(sample, EmpiricalSample) else sample
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("KS statistic of an empty sample")
    if np.iscomplexobj(values):
        raise TypeError("KS statistic needs real-valued samples")
    x = np.sort(values.astype(np.float64))
    f = np.asarray(reference_cdf(x), dtype=np.float64)
    if f.shape != x.shape:
        f = np.array([reference_cdf(v) for v in x], dtype=np.float64)
    m = len(x)
    grid = np.arange(1, m + 1) / m
    return float(max((grid - f).max(), (f - (grid - 1.0 / m)).max()))


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    estimate: complex
    standard_error: float


def moment_report(sample, orders) -> list[MomentEstimate]:
    """Plug-in raw moments with jackknife standard errors.

    For a plug-in mean the jackknife variance collapses to the exact closed
    form s^2/n with s the unbiased standard deviation of the transformed
    values; that is what is computed here.
    """
    values = sample.values if isinstance(sample, EmpiricalSample) else sample
    values = np.asarray(values)
    if len(values) < 2:
        raise ValueError("moment report needs at least two values")
    out = []
    for k in orders:
        y = values**k
        est = y.mean()
        se = float(np.std(y, ddof=1) / math.sqrt(len(y)))
        est = float(est.real) if not np.iscomplexobj(y) else complex(est)
        out.append(MomentEstimate(order=int(k), estimate=est, standard_error=se))
    return out


# ---------------------------------------------------------------------------
# Monte Carlo over matrix ensembles
# ---------------------------------------------------------------------------

def _spectrum_simple_at(dec: SpectralDecomposition, indices) -> bool:
    return all(spectral.nearest_gap(dec, i) > spectral.SIMPLE_GAP_TOL for i in indices)


def _rescaled_decomposition(spec, matrix_seed, normalization=spectral.RAW, phase_seed=None):
    ms = ensembles.sample(spec, matrix_seed)
    return spectral.decompose(ensembles.rescale(ms), normalization, phase_seed)


@dataclass(frozen=True)
class FunctionalEstimate:
    mean: float
    standard_error: float
    trials: int
    excluded: int
    values: np.ndarray = field(repr=False)
    provenance: Provenance


def functional_estimate(
    spec: WignerSpec,
    observable: ObservableConfig,
    functional: SmoothFunctional,
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> FunctionalEstimate:
    """Monte Carlo mean of G(Phi(A_n)) over iid matrix draws.

    Per-trial seeds derive from the master seed, and the reduction runs in
    trial order, so the estimate is identical for any worker-thread count.
    Trials where a required eigenvalue is non-simple are excluded and counted.
    """
    if trials < 30:
        raise ValueError("functional estimates need at least 30 trials")

    def one_trial(t: int):
        dec = _rescaled_decomposition(spec, derive_seed(master_seed, t))
        if not _spectrum_simple_at(dec, observable.i_indices):
            return None
        phi = spectral.phi_observable(
            dec, observable.i_indices, observable.p_indices, observable.q_indices, spec.n
        )
        return functional(phi)

    results = trial_map(one_trial, trials, threads)
    values = np.array([r for r in results if r is not None], dtype=np.float64)
    excluded = trials - len(values)
    if len(values) < 2:
        raise ValueError(f"all but {len(values)} trials excluded; cannot estimate")
    return FunctionalEstimate(
        mean=float(values.mean()),
        standard_error=float(values.std(ddof=1) / math.sqrt(len(values))),
        trials=trials,
        excluded=excluded,
        values=values,
        provenance=Provenance(spec.label, f"{observable.label}:{functional.kind}", master_seed),
    )


def _matched_order(d1, d2, k_max: int, tol: float = 1e-10) -> int:
    order = 0
    for k in range(1, k_max + 1):
        if not atoms.matches_to_order(d1, d2, k, tol):
            break
        order = k
    return order


def four_moment_compare(
    spec_a: WignerSpec,
    spec_b: WignerSpec,
    observable: ObservableConfig,
    functional: SmoothFunctional,
    trials: int,
    seed: int,
    threads: int = 1,
    allow_mismatch: bool = False,
) -> TestReport:
    """Compare E G(Phi) between two ensembles whose entries match moments.

    Requires the off-diagonal laws to match to order 4 and the diagonal laws
    to order 2 (the hypothesis under which the expectations are predicted to
    be indistinguishable); pass ``allow_mismatch=True`` to run a negative
    control anyway, in which case the report flags the actual matched orders.
    """
    if spec_a.n != spec_b.n:
        raise ValueError("ensembles must share the dimension n")
    off_order = _matched_order(spec_a.off_diag, spec_b.off_diag, 4)
    diag_order = _matched_order(spec_a.diag, spec_b.diag, 2)
    hypothesis_ok = off_order >= 4 and diag_order >= 2
    if not hypothesis_ok and not allow_mismatch:
        raise HypothesisViolationError(
            f"moment matching fails: off-diagonal order {off_order} < 4 or "
            f"diagonal order {diag_order} < 2 (pass allow_mismatch=True to override)"
        )
    est_a = functional_estimate(spec_a, observable, functional, trials, derive_seed(seed, 0), threads)
    est_b = functional_estimate(spec_b, observable, functional, trials, derive_seed(seed, 1), threads)
    combined_se = math.hypot(est_a.standard_error, est_b.standard_error)
    return TestReport.evaluate(
        name="four_moment_compare",
        statistic=abs(est_a.mean - est_b.mean),
        threshold=SIGMA_FACTOR * combined_se,
        standard_error=combined_se,
        metadata={
            "hypothesis_ok": hypothesis_ok,
            "off_diag_matched_order": off_order,
            "diag_matched_order": diag_order,
            "mean_a": est_a.mean,
            "mean_b": est_b.mean,
            "se_a": est_a.standard_error,
            "se_b": est_b.standard_error,
            "excluded_a": est_a.excluded,
            "excluded_b": est_b.excluded,
            "trials": trials,
            "seed": seed,
            "spec_a": spec_a.label,
            "spec_b": spec_b.label,
        },
    )


# ---------------------------------------------------------------------------
# Eigenvector coefficient and projection experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientDraws:
    """Per-trial normalized coefficients sqrt(n) u_{i,p} for several p."""

    values: np.ndarray = field(repr=False)  # shape (trials_used, len(p_indices))
    excluded: int
    provenance: Provenance


def coefficient_samples(
    spec: WignerSpec,
    i: int,
    p_indices,
    normalization: str,
    trials: int,
    seed: int,
    threads: int = 1,
) -> CoefficientDraws:
    """Collect sqrt(n) u_{i,p} across seeds under a phase normalization."""
    if normalization not in (ADHOC, RANDOM):
        raise ValueError("coefficient laws need adhoc or random normalization")
    p_idx = [int(p) for p in p_indices]
    root_n = math.sqrt(spec.n)

    def one_trial(t: int):
        trial_seed = derive_seed(seed, t)
        dec = _rescaled_decomposition(
            spec,
            derive_seed(trial_seed, 0),
            normalization,
            phase_seed=derive_seed(trial_seed, 1),
        )
        if not _spectrum_simple_at(dec, [i]):
            return None
        return root_n * dec.eigenvectors[p_idx, i]

    results = trial_map(one_trial, trials, threads)
    rows = [r for r in results if r is not None]
    values = np.array(rows)
    return CoefficientDraws(
        values=values,
        excluded=trials - len(rows),
        provenance=Provenance(
            spec.label, f"coeff(i={i},p={p_idx},norm={normalization})", seed
        ),
    )


@dataclass(frozen=True)
class CltReport:
    """Composite verdict of a projection CLT experiment."""

    checks: tuple[TestReport, ...]
    mean: float
    variance: float
    trials: int
    excluded: int
    values: np.ndarray = field(repr=False)
    provenance: Provenance

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "mean": self.mean,
            "variance": self.variance,
            "trials": self.trials,
            "excluded": self.excluded,
            "provenance": self.provenance.as_dict(),
            "checks": [check.as_dict() for check in self.checks],
        }


def _resolve_rule(rule, n: int):
    return rule(n) if callable(rule) else rule


def clt_projection_experiment(
    spec: WignerSpec,
    index,
    direction,
    normalization: str,
    trials: int,
    seed: int,
    threads: int = 1,
    ks_threshold: float = DEFAULT_CLT_KS_THRESHOLD,
    mean_tol: float = DEFAULT_CLT_MEAN_TOL,
    var_tol: float = DEFAULT_CLT_VAR_TOL,
    allow_first_coordinate: bool = False,
) -> CltReport:
    """Test whether sqrt(n) a . u_i(M_n) is standard normal across seeds.

    ``index`` and ``direction`` may be values or callables of n (index rules
    such as the middle index, direction rules such as the uniform vector).
    Under the adhoc normalization the first coefficient of u_i is forced
    positive, so the experiment additionally requires |a . e_1| <= n^{-1/4}
    unless overridden.
    """
    if spec.symmetry != ensembles.REAL_SYMMETRIC:
        raise HypothesisViolationError("projection CLT applies to real symmetric ensembles")
    if normalization not in (ADHOC, RANDOM):
        raise ValueError("projection CLT needs adhoc or random normalization")
    n = spec.n
    i = int(_resolve_rule(index, n))
    a = np.asarray(_resolve_rule(direction, n), dtype=np.float64)
    if a.shape != (n,):
        raise ValueError(f"direction must be a length-{n} vector")
    if abs(np.linalg.norm(a) - 1.0) > 1e-10:
        raise ValueError("direction must be a unit vector")
    if (
        normalization == ADHOC
        and abs(a[0]) > n ** -0.25
        and not allow_first_coordinate
    ):
        raise HypothesisViolationError(
            f"|a . e_1| = {abs(a[0])!r} exceeds n^(-1/4); the first coefficient "
            "is sign-constrained under the adhoc normalization"
        )
    root_n = math.sqrt(n)

    def one_trial(t: int):
        trial_seed = derive_seed(seed, t)
        dec = _rescaled_decomposition(
            spec,
            derive_seed(trial_seed, 0),
            normalization,
            phase_seed=derive_seed(trial_seed, 1),
        )
        if not _spectrum_simple_at(dec, [i]):
            return None
        return root_n * float(a @ dec.eigenvectors[:, i])

    results = trial_map(one_trial, trials, threads)
    values = np.array([r for r in results if r is not None], dtype=np.float64)
    excluded = trials - len(values)
    if len(values) < 2:
        raise ValueError(f"all but {len(values)} trials excluded; cannot test")
    mean = float(values.mean())
    variance = float(values.var(ddof=1))
    used = len(values)
    checks = (
        TestReport.evaluate("ks_vs_normal", ks_statistic(values, ndtr), ks_threshold),
        TestReport.evaluate(
            "abs_mean", abs(mean), mean_tol,
            standard_error=float(values.std(ddof=1) / math.sqrt(used)),
        ),
        TestReport.evaluate(
            "abs_var_minus_1", abs(variance - 1.0), var_tol,
            standard_error=math.sqrt(2.0 / (used - 1)),
        ),
    )
    return CltReport(
        checks=checks,
        mean=mean,
        variance=variance,
        trials=trials,
        excluded=excluded,
        values=values,
        provenance=Provenance(
            spec.label, f"projection(i={i},norm={normalization})", seed
        ),
    )


@dataclass(frozen=True)
class FamilyCltReport:
    """Joint verdict for an orthonormal family of projection directions."""

    checks: tuple[TestReport, ...]
    correlations: np.ndarray = field(repr=False)
    trials: int
    excluded: int
    values: np.ndarray = field(repr=False)
    provenance: Provenance

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def orthonormal_family_clt(
    spec: WignerSpec,
    index,
    directions,
    trials: int,
    seed: int,
    threads: int = 1,
    normalization: str = RANDOM,
    ks_threshold: float = DEFAULT_CLT_KS_THRESHOLD,
    se_factor: float = 4.0,
) -> FamilyCltReport:
    """Joint CLT for sqrt(n) a_j . u_i over an orthonormal family a_1..a_l.

    Checks each coordinate against the normal law (KS plus first and second
    moments) and every pairwise empirical correlation against zero at
    ``se_factor`` standard errors, reflecting the iid limit.
    """
    if spec.symmetry != ensembles.REAL_SYMMETRIC:
        raise HypothesisViolationError("projection CLT applies to real symmetric ensembles")
    n = spec.n
    i = int(_resolve_rule(index, n))
    mat = np.column_stack([np.asarray(_resolve_rule(a, n), dtype=np.float64) for a in directions])
    l = mat.shape[1]
    if l > 4:
        raise ValueError("orthonormal families are capped at 4 vectors")
    gram = mat.T @ mat
    if np.abs(gram - np.eye(l)).max() > 1e-10:
        raise ValueError("directions must be orthonormal within 1e-10")
    if normalization == ADHOC and np.any(np.abs(mat[0]) > n ** -0.25):
        raise HypothesisViolationError(
            "a vector in the family loads on the first coordinate; use the "
            "random normalization"
        )
    root_n = math.sqrt(n)

    def one_trial(t: int):
        trial_seed = derive_seed(seed, t)
        dec = _rescaled_decomposition(
            spec,
            derive_seed(trial_seed, 0),
            normalization,
            phase_seed=derive_seed(trial_seed, 1),
        )
        if not _spectrum_simple_at(dec, [i]):
            return None
        return root_n * (mat.T @ dec.eigenvectors[:, i])

    results = trial_map(one_trial, trials, threads)
    rows = [r for r in results if r is not None]
    values = np.array(rows, dtype=np.float64)
    excluded = trials - len(rows)
    used = len(rows)
    if used < 2:
        raise ValueError(f"all but {used} trials excluded; cannot test")
    se_mean = 1.0 / math.sqrt(used)
    checks = []
    for j in range(l):
        col = values[:, j]
        checks.append(
            TestReport.evaluate(f"ks_vs_normal[{j}]", ks_statistic(col, ndtr), ks_threshold)
        )
        checks.append(
            TestReport.evaluate(
                f"abs_mean[{j}]", abs(col.mean()), se_factor * se_mean,
                standard_error=se_mean,
            )
        )
        checks.append(
            TestReport.evaluate(
                f"abs_var_minus_1[{j}]",
                abs(col.var(ddof=1) - 1.0),
                se_factor * math.sqrt(2.0 / (used - 1)),
                standard_error=math.sqrt(2.0 / (used - 1)),
            )
        )
    corr = np.corrcoef(values, rowvar=False)
    for j in range(l):
        for k in range(j + 1, l):
            checks.append(
                TestReport.evaluate(
                    f"abs_corr[{j},{k}]", abs(corr[j, k]), se_factor * se_mean,
                    standard_error=se_mean,
                )
            )
    return FamilyCltReport(
        checks=tuple(checks),
        correlations=corr,
        trials=trials,
        excluded=excluded,
        values=values,
        provenance=Provenance(
            spec.label, f"family(i={i},l={l},norm={normalization})", seed
        ),
    )

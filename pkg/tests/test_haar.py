import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from wigner_lab import haar, stats
from wigner_lab.spectral import ADHOC, RANDOM


def test_columns_orthonormal():
    for group in (haar.ORTHOGONAL, haar.UNITARY):
        h = haar.haar_sample(group, 30, seed=1)
        gram = h.entries.conj().T @ h.entries
        assert np.abs(gram - np.eye(30)).max() <= 1e-11


def test_row_norms_are_one():
    h = haar.haar_sample(haar.UNITARY, 25, seed=2)
    norms = np.linalg.norm(h.entries, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-11


def test_orthogonal_matrices_are_real_with_unit_determinant():
    h = haar.haar_sample(haar.ORTHOGONAL, 20, seed=3)
    assert np.isrealobj(h.entries)
    assert abs(abs(np.linalg.det(h.entries)) - 1.0) <= 1e-9


def test_scaled_first_entry_second_moment_is_one():
    # Row exchangeability forces E[u_{0,0}^2] = 1/n exactly at every n.
    n, trials = 25, 10_000
    draws = np.array(
        [haar.haar_sample(haar.ORTHOGONAL, n, 50_000 + t).entries[0, 0] for t in range(trials)]
    )
    sq = n * draws**2
    se = sq.std(ddof=1) / math.sqrt(trials)
    assert abs(sq.mean() - 1.0) <= 3 * se


def test_minor_full_matrix_is_sqrt_n_scaling():
    h = haar.haar_sample(haar.ORTHOGONAL, 6, seed=4)
    block = haar.minor(h, range(6), range(6))
    assert np.array_equal(block, math.sqrt(6) * h.entries)


def test_minor_validates_indices():
    h = haar.haar_sample(haar.ORTHOGONAL, 5, seed=5)
    with pytest.raises(ValueError):
        haar.minor(h, [0, 0], [1, 2])
    with pytest.raises(ValueError):
        haar.minor(h, [0, 7], [1, 2])


def test_scalar_minor_is_asymptotically_normal():
    n, trials = 50, 3000
    values = np.array(
        [haar.minor(haar.haar_sample(haar.ORTHOGONAL, n, 60_000 + t), [0], [0])[0, 0] for t in range(trials)]
    )
    law = haar.ReferenceLaw(haar.NORMAL)
    # 95% KS quantile 1.36/sqrt(trials) plus a finite-n margin
    assert stats.ks_statistic(values, law.cdf) <= 1.36 / math.sqrt(trials) + 0.015


def test_diagonal_block_entries_asymptotically_independent():
    n, trials = 200, 2000
    pairs = np.array(
        [
            np.diag(haar.minor(haar.haar_sample(haar.ORTHOGONAL, n, 70_000 + t), [0, 1], [0, 1]))
            for t in range(trials)
        ]
    )
    corr = np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1]
    assert abs(corr) <= 4.0 / math.sqrt(trials)


def test_haar_invariance_under_row_permutation():
    # Left-multiplying by a permutation matrix permutes rows; Haar invariance
    # means entry (0, 0) of PU has the same law as entry (0, 0) of U.
    n, trials = 20, 4000
    base = np.array(
        [haar.haar_sample(haar.ORTHOGONAL, n, 80_000 + t).entries[0, 0] for t in range(trials)]
    )
    permuted = np.array(
        [haar.haar_sample(haar.ORTHOGONAL, n, 90_000 + t).entries[n - 1, 0] for t in range(trials)]
    )
    d = ks_2samp(base, permuted).statistic
    assert d <= 1.628 * math.sqrt(2.0 / trials)  # 99% two-sample threshold


def test_reference_law_kinds():
    assert haar.goe_gue_reference("goe", 0, ADHOC).kind == haar.HALF_NORMAL
    assert haar.goe_gue_reference("goe", 1, ADHOC).kind == haar.NORMAL
    assert haar.goe_gue_reference("goe", 0, RANDOM).kind == haar.NORMAL
    assert haar.goe_gue_reference("gue", 0, ADHOC).kind == haar.COMPLEX_MODULUS
    assert haar.goe_gue_reference("gue", 2, ADHOC).kind == haar.COMPLEX_NORMAL
    assert haar.goe_gue_reference("gue", 0, RANDOM).kind == haar.COMPLEX_NORMAL
    with pytest.raises(ValueError):
        haar.goe_gue_reference("goe", 0, "raw")
    with pytest.raises(ValueError):
        haar.goe_gue_reference("gse", 0, ADHOC)


def test_half_normal_reference_sampler_mean():
    law = haar.ReferenceLaw(haar.HALF_NORMAL)
    rng = np.random.default_rng(17)
    draws = law.sample(rng, 100_000)
    se = draws.std(ddof=1) / math.sqrt(len(draws))
    assert abs(draws.mean() - math.sqrt(2 / math.pi)) <= 3 * se
    assert law.cdf(0.0) == pytest.approx(0.0)
    assert law.cdf(-1.0) == 0.0
    assert law.cdf(50.0) == pytest.approx(1.0)


def test_normal_reference_sampler_mean():
    law = haar.ReferenceLaw(haar.NORMAL)
    rng = np.random.default_rng(18)
    draws = law.sample(rng, 100_000)
    assert abs(draws.mean()) <= 3.0 / math.sqrt(len(draws))
    assert law.cdf(0.0) == pytest.approx(0.5)


def test_complex_reference_laws():
    rng = np.random.default_rng(19)
    z = haar.ReferenceLaw(haar.COMPLEX_NORMAL).sample(rng, 100_000)
    sq = np.abs(z) ** 2
    assert abs(sq.mean() - 1.0) <= 4 * sq.std(ddof=1) / math.sqrt(len(sq))
    modulus = haar.ReferenceLaw(haar.COMPLEX_MODULUS)
    assert modulus.cdf(1.0) == pytest.approx(1.0 - math.exp(-1.0))
    with pytest.raises(ValueError):
        haar.ReferenceLaw(haar.COMPLEX_NORMAL).cdf(0.0)


def test_haar_sampler_deterministic():
    a = haar.haar_sample(haar.UNITARY, 12, seed=77)
    b = haar.haar_sample(haar.UNITARY, 12, seed=77)
    assert np.array_equal(a.entries, b.entries)
